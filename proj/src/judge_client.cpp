#include <stdexcept>
#include <string>

#include <httplib.h>

#include "convqa/evaluate.hpp"

namespace convqa {

std::string query_judge(const std::string& endpoint, const std::string& prompt) {
    const std::string scheme = "http://";
    if (endpoint.rfind(scheme, 0) != 0) {
        throw std::invalid_argument("query_judge: endpoint must start with http:// (got '" +
                                    endpoint + "')");
    }
    const std::string rest = endpoint.substr(scheme.size());
    const std::size_t slash = rest.find('/');
    const std::string authority = slash == std::string::npos ? rest : rest.substr(0, slash);
    const std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
    if (authority.empty()) {
        throw std::invalid_argument("query_judge: endpoint has no host: '" + endpoint + "'");
    }
    std::string host = authority;
    int port = 80;
    const std::size_t colon = authority.rfind(':');
    if (colon != std::string::npos) {
        host = authority.substr(0, colon);
        try {
            port = std::stoi(authority.substr(colon + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("query_judge: bad port in endpoint '" + endpoint + "'");
        }
    }

    httplib::Client client(host, port);
    client.set_read_timeout(60, 0);
    const httplib::Result result = client.Post(path, prompt, "text/plain");
    if (!result) {
        throw std::runtime_error("query_judge: request to " + endpoint + " failed: " +
                                 httplib::to_string(result.error()));
    }
    if (result->status < 200 || result->status >= 300) {
        throw std::runtime_error("query_judge: " + endpoint + " returned status " +
                                 std::to_string(result->status));
    }
    return result->body;
}

} // namespace convqa
