import math
import random

import pytest
from hypothesis import given, strategies as st

from ghsom_workbench.errors import ContractError
from ghsom_workbench.tfidf import (
    TopLConfig,
    build_corpus,
    comment_features,
    tfidf_score,
    tokenize,
)

from oracles import brute_comment_features, brute_tfidf

LN2 = math.log(2.0)


def test_tokenize_posh_cafe():
    assert tokenize("A posh cafe is over there!") == ["a", "posh", "cafe", "is", "over", "there"]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_folds_case_keeps_duplicates():
    assert tokenize("Tomato Ramen, tomato") == ["tomato", "ramen", "tomato"]


def test_build_corpus_document_frequencies(tiny_corpus):
    assert tiny_corpus.document_count == 2
    assert tiny_corpus.doc_frequency == {"a": 1, "b": 2, "c": 1}


def test_build_corpus_single_document():
    corpus = build_corpus([("d", "x y x z")])
    assert all(df == 1 for df in corpus.doc_frequency.values())


def test_build_corpus_rejects_duplicates_and_empty():
    with pytest.raises(ContractError):
        build_corpus([("d", "a"), ("d", "b")])
    with pytest.raises(ContractError):
        build_corpus([])


def test_tfidf_score_worked_example(tiny_corpus):
    score = tfidf_score("a", ["a", "b", "a"], tiny_corpus)
    assert score.tf == pytest.approx(2 / 3, abs=0)
    assert score.idf == pytest.approx(LN2, abs=1e-15)
    assert score.tfidf == pytest.approx(0.46209812037329684, abs=1e-15)


def test_tfidf_term_in_every_document_scores_zero(tiny_corpus):
    assert tfidf_score("b", ["b", "x"], tiny_corpus).tfidf == 0.0


def test_tfidf_absent_term_smoothed(tiny_corpus):
    score = tfidf_score("novel", ["novel", "x"], tiny_corpus)
    assert score.idf == pytest.approx(LN2, abs=1e-15)
    assert score.tfidf == pytest.approx(0.34657359027997264, abs=1e-15)


def test_tfidf_empty_comment_rejected(tiny_corpus):
    with pytest.raises(ContractError):
        tfidf_score("a", [], tiny_corpus)


def test_comment_features_empty(tiny_corpus):
    assert comment_features("", tiny_corpus) == (0.0, 0.0, [])


def test_comment_features_single_term(tiny_corpus):
    tmax, tsum, terms = comment_features("a a", tiny_corpus)
    assert tmax == tsum
    assert terms == ["a"]


def test_comment_features_worked_example(tiny_corpus):
    tmax, tsum, terms = comment_features("a b a", tiny_corpus, TopLConfig(l=3))
    score_a = tfidf_score("a", ["a", "b", "a"], tiny_corpus).tfidf
    score_b = tfidf_score("b", ["a", "b", "a"], tiny_corpus).tfidf
    assert tmax == pytest.approx(0.46209812037329684, abs=1e-15)
    assert tsum == pytest.approx(score_a + score_b, abs=1e-15)
    assert terms[0] == "a"


def test_toplconfig_validation():
    with pytest.raises(ContractError):
        TopLConfig(l=0)
    with pytest.raises(ContractError):
        TopLConfig(tf_source="website")


def test_corpus_tf_variant_is_available(tiny_corpus):
    tmax, tsum, _ = comment_features("a b a", tiny_corpus, TopLConfig(tf_source="corpus"))
    # tf(a) = 2/5 over the corpus tokens, idf = ln 2
    assert tmax == pytest.approx((2 / 5) * LN2, abs=1e-15)
    assert tsum >= tmax


words = st.sampled_from("alpha beach cafe deer eel fog gate hill inn jetty".split())


@given(st.lists(words, min_size=1, max_size=12))
def test_score_invariant_under_token_permutation(tokens):
    corpus = build_corpus([("d1", "alpha beach cafe"), ("d2", "cafe deer eel")])
    shuffled = list(tokens)
    random.Random(0).shuffle(shuffled)
    for term in set(tokens):
        assert (
            tfidf_score(term, tokens, corpus).tfidf
            == tfidf_score(term, shuffled, corpus).tfidf
        )


@given(st.lists(words, min_size=1, max_size=12))
def test_sum_at_least_max(tokens):
    corpus = build_corpus([("d1", "alpha beach cafe"), ("d2", "cafe deer eel")])
    tmax, tsum, _ = comment_features(" ".join(tokens), corpus)
    assert tsum >= tmax >= 0.0


@given(
    st.lists(st.lists(words, min_size=1, max_size=8), min_size=1, max_size=4),
    st.lists(words, min_size=1, max_size=8),
)
def test_doubling_corpus_preserves_idf(doc_tokens, comment):
    # holds for corpus terms (df and |D| scale together); absent terms are
    # df=1 smoothed, which deliberately does not scale
    docs = [(f"d{i}", " ".join(toks)) for i, toks in enumerate(doc_tokens)]
    doubled = docs + [(f"e{i}", text) for i, (_, text) in enumerate(docs)]
    corpus, corpus2 = build_corpus(docs), build_corpus(doubled)
    for term in set(comment) & set(corpus.doc_frequency):
        assert tfidf_score(term, comment, corpus).idf == pytest.approx(
            tfidf_score(term, comment, corpus2).idf, abs=1e-12
        )


def test_top_l_matches_sort_oracle(tourism_corpus):
    comment = "fishing lake spa and sea view with posh cafe and oyster street food"
    docs = {
        "hiroshima": "oyster street food and posh cafe downtown sightseeing",
        "kure": "navy port museum and sea view",
        "hatsukaichi": "island shrine gate over the sea miyajima deer",
        "onomichi": "seto sea hillside temples and cats",
        "fukuyama": "castle rose festival events",
        "miyoshi": "river fog wine and fishing lake in the mountains",
        "akitakata": "rice fields kagura dance performance",
        "blog-asobiba": "playground spots for children spa and game center",
        "blog-outdoor": "outdoor map camping fishing lake spa roadside station",
    }
    for l in (1, 2, 3, 5, 50):
        got = comment_features(comment, tourism_corpus, TopLConfig(l=l))
        want = brute_comment_features(comment, docs, l)
        assert got[0] == pytest.approx(want[0], abs=1e-12)
        assert got[1] == pytest.approx(want[1], abs=1e-12)
        assert got[2] == want[2]


def test_random_corpora_match_brute_force():
    rng = random.Random(12345)
    vocabulary = [f"w{i}" for i in range(12)]
    for _ in range(50):
        n_docs = rng.randint(1, 5)
        docs = {
            f"d{j}": " ".join(rng.choices(vocabulary, k=rng.randint(1, 20)))
            for j in range(n_docs)
        }
        corpus = build_corpus(list(docs.items()))
        comment = " ".join(rng.choices(vocabulary, k=rng.randint(1, 15)))
        tokens = tokenize(comment)
        for term in set(tokens):
            assert tfidf_score(term, tokens, corpus).tfidf == pytest.approx(
                brute_tfidf(term, tokens, docs), abs=1e-12
            )
        got = comment_features(comment, corpus, TopLConfig(l=3))
        want = brute_comment_features(comment, docs, 3)
        assert got[0] == pytest.approx(want[0], abs=1e-12)
        assert got[1] == pytest.approx(want[1], abs=1e-12)
        assert got[2] == want[2]
