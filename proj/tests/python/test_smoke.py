"""Smoke tests for the python bindings (the heavy lifting lives in the C++ suites)."""

import math

import convqa


def test_version():
    assert convqa.__version__ == "0.1.0"


def test_segmentation():
    text = "Granite outcrops shelter mosses. They grow on rocky hills. Dr. Smith mapped them."
    assert convqa.segment_sentences(text) == [
        "Granite outcrops shelter mosses.",
        "They grow on rocky hills.",
        "Dr. Smith mapped them.",
    ]


def test_keywords_and_prompt():
    assert convqa.extract_keywords("It will regenerate from seed only.", max_keywords=2) == [
        "regenerate",
        "seed",
    ]
    assert convqa.keyword_prompt(["regenerate", "seed"]) == "Keyword: regenerate, seed"


def test_combined_loss():
    assert convqa.combined_loss(1.0, 2.0, 3.0) == 1.5
    assert convqa.combined_loss(1.0, 2.0, 3.0, lambda_qam=0.0, lambda_tdg=0.0) == 1.0


def test_relevance():
    score = convqa.relevance(
        "The shrub grows in western Australia.",
        "How tall is the shrub?",
        "It grows to a height of two metres.",
    )
    assert score == 0.5


def test_ranking_metrics():
    assert math.isclose(
        convqa.ndcg_at_k(["noise", "hit"], ["hit"], 2), 0.6309297535714575, rel_tol=0, abs_tol=1e-12
    )
    assert convqa.recall_at_k(["noise", "hit"], ["hit"], 2) == 1.0
    assert convqa.map_at_k(["noise", "hit"], ["hit"], 2) == 0.5


def test_judge_prompt():
    prompt = convqa.build_judge_prompt("ctx", "How A?", "How B?", "ans")
    assert prompt.count("options: [Question A, Equal, Question B]") == 3


def test_inpaint():
    dialog = convqa.inpaint(
        "p1",
        "Hills",
        "Granite outcrops shelter mosses. They grow on rocky hills.",
        beam_size=3,
    )
    assert dialog["id"] == "p1"
    assert dialog["title"] == "Hills"
    assert dialog["prompt"] == "Hello, I want to learn about Hills."
    assert len(dialog["turns"]) == 2
    for turn in dialog["turns"]:
        assert turn["question"]
        assert turn["answer"]
        assert turn["keywords"]
    assert dialog["turns"][0]["answer"] == "Granite outcrops shelter mosses."
