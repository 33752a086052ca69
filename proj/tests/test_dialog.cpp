#include <stdexcept>

#include "convqa/dialog.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace convqa;

TEST_SUITE("dialog") {

TEST_CASE("role and origin names round-trip") {
    CHECK(role_name(Role::User) == "user");
    CHECK(role_name(Role::Agent) == "agent");
    CHECK(role_from_name("agent") == Role::Agent);
    CHECK_THROWS_AS(role_from_name("bot"), std::invalid_argument);

    CHECK(origin_name(Origin::SourceSentence) == "source_sentence");
    CHECK(origin_name(Origin::Generated) == "generated");
    CHECK(origin_name(Origin::Corpus) == "corpus");
    CHECK(origin_from_name("generated") == Origin::Generated);
    CHECK_THROWS_AS(origin_from_name("unknown"), std::invalid_argument);
}

TEST_CASE("reference dialog is valid") {
    CHECK(validate_dialog(fixtures::wiki_shrub_dialog()).empty());
    CHECK(fixtures::wiki_shrub_dialog().turn_count() == 12);
}

TEST_CASE("validate_dialog reports every violation") {
    Dialog d;
    d.id = "bad";
    SUBCASE("too short") {
        d.utterances = {fixtures::user("hi?")};
        const auto v = validate_dialog(d);
        REQUIRE(v.size() == 1);
        CHECK(v[0].find("fewer than 2") != std::string::npos);
    }
    SUBCASE("empty and unnormalized text") {
        d.utterances = {fixtures::user(""), fixtures::agent("a  b")};
        const auto v = validate_dialog(d);
        REQUIRE(v.size() == 2);
        CHECK(v[0].find("utterance 0") != std::string::npos);
        CHECK(v[0].find("empty") != std::string::npos);
        CHECK(v[1].find("utterance 1") != std::string::npos);
        CHECK(v[1].find("normalized") != std::string::npos);
    }
    SUBCASE("non-alternating roles") {
        d.utterances = {fixtures::user("a?"), fixtures::user("b?")};
        const auto v = validate_dialog(d);
        REQUIRE(v.size() == 1);
        CHECK(v[0].find("alternate") != std::string::npos);
    }
    SUBCASE("source sentence must be agent-side") {
        d.utterances = {fixtures::user("q?", Origin::SourceSentence), fixtures::agent("a.")};
        const auto v = validate_dialog(d);
        REQUIRE(v.size() == 1);
        CHECK(v[0].find("agent role") != std::string::npos);
    }
    SUBCASE("multiple violations accumulate") {
        d.utterances = {fixtures::user(""), fixtures::user(" x")};
        CHECK(validate_dialog(d).size() == 3); // empty, unnormalized, non-alternating
    }
}

TEST_CASE("mask_utterance replaces exactly one slot in the plain view") {
    const Dialog d = fixtures::two_pair_dialog();
    const MaskedDialog m = mask_utterance(d, 2, "<mask>");
    CHECK(m.mask_index == 2);
    CHECK(m.render_plain() == "Q one? A one. <mask> A two.");
    CHECK(m.render_plain("|") == "Q one?|A one.|<mask>|A two.");
    // base dialog untouched
    CHECK(d.utterances[2].text == "Q two?");
    CHECK_THROWS_AS(mask_utterance(d, 4, "<mask>"), std::out_of_range);
}

TEST_CASE("qa_pairs finds user->agent adjacencies") {
    const Dialog d = fixtures::wiki_shrub_dialog();
    const auto pairs = qa_pairs(d);
    REQUIRE(pairs.size() == 6);
    CHECK(pairs[0].question.text == "Where is Grevillea rudis found?");
    CHECK(pairs[0].turn_index == 0);
    CHECK(pairs[5].answer.text == "It will regenerate from seed only.");
    CHECK(pairs[5].turn_index == 10);

    // agent-first dialog: the leading answer has no question
    Dialog a;
    a.id = "agent-first";
    a.utterances = {fixtures::agent("Intro."), fixtures::user("q?"), fixtures::agent("a.")};
    const auto p2 = qa_pairs(a);
    REQUIRE(p2.size() == 1);
    CHECK(p2[0].turn_index == 1);
}

TEST_CASE("passage normalized_text joins sentences") {
    Passage p;
    p.sentences = {"One.", "Two."};
    CHECK(p.normalized_text() == "One. Two.");
    p.sentences = {};
    CHECK(p.normalized_text().empty());
}

} // TEST_SUITE
