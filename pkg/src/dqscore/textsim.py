"""Text preprocessing and the thirteen normalized similarity algorithms.

Every algorithm returns a score in [0, 1], is symmetric in its arguments
and scores identical non-empty inputs as 1. Two empty inputs score 1 by
convention; exactly one empty input scores 0. The hybrid metadata-coupling
score is the plain mean of all thirteen.

Character algorithms work on strings, token algorithms on term-frequency
vectors over ordered token lists, feature algorithms on token sets, and
the phonetic algorithm compares word lists pairwise in order.
"""

from __future__ import annotations

import math
from collections import Counter
from importlib import resources

from . import porter

#: Canonical identifiers of the thirteen algorithms, grouped by family.
CHAR_ALGORITHMS = (
    "hamming",
    "levenshtein",
    "jaro_winkler",
    "needleman_wunsch",
    "smith_waterman",
    "lcs",
)
TOKEN_ALGORITHMS = ("jaccard", "cosine", "manhattan", "tanimoto")
FEATURE_ALGORITHMS = ("tversky", "overlap")
PHONETIC_ALGORITHMS = ("mra",)
ALGORITHMS = (
    CHAR_ALGORITHMS + TOKEN_ALGORITHMS + FEATURE_ALGORITHMS + PHONETIC_ALGORITHMS
)


def _load_stopwords() -> frozenset[str]:
    text = resources.files(__package__).joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


STOPWORDS = _load_stopwords()


def preprocess(text: str) -> list[str]:
    """Lowercase, strip punctuation/symbols, drop stopwords, stem.

    Token order is preserved; the result contains no empty tokens and no
    whitespace or punctuation inside a token.
    """
    cleaned = "".join(ch if ch.isalnum() else " " for ch in text.lower())
    return [porter.stem(tok) for tok in cleaned.split() if tok not in STOPWORDS]


# --------------------------------------------------------------------------
# Character-based algorithms


def _levenshtein_distance(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(
                    previous[j] + 1,
                    current[j - 1] + 1,
                    previous[j - 1] + (ca != cb),
                )
            )
        previous = current
    return previous[-1]


def levenshtein(a: str, b: str) -> float:
    if not a and not b:
        return 1.0
    return 1.0 - _levenshtein_distance(a, b) / max(len(a), len(b))


def hamming(a: str, b: str) -> float:
    """Positional mismatches; the length difference counts as mismatches."""
    if not a and not b:
        return 1.0
    longest = max(len(a), len(b))
    mismatches = sum(x != y for x, y in zip(a, b)) + abs(len(a) - len(b))
    return 1.0 - mismatches / longest


def jaro_winkler(a: str, b: str) -> float:
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    window = max(0, max(len(a), len(b)) // 2 - 1)
    a_flags = [False] * len(a)
    b_flags = [False] * len(b)
    matches = 0
    for i, ch in enumerate(a):
        lo = max(0, i - window)
        hi = min(len(b), i + window + 1)
        for j in range(lo, hi):
            if not b_flags[j] and b[j] == ch:
                a_flags[i] = b_flags[j] = True
                matches += 1
                break
    if matches == 0:
        return 0.0
    transpositions = 0
    k = 0
    for i, flagged in enumerate(a_flags):
        if not flagged:
            continue
        while not b_flags[k]:
            k += 1
        if a[i] != b[k]:
            transpositions += 1
        k += 1
    transpositions //= 2
    jaro = (
        matches / len(a)
        + matches / len(b)
        + (matches - transpositions) / matches
    ) / 3.0
    if jaro <= 0.7:
        return jaro
    prefix = 0
    for ca, cb in zip(a[:4], b[:4]):
        if ca != cb:
            break
        prefix += 1
    return jaro + prefix * 0.1 * (1.0 - jaro)


def _needleman_wunsch_score(a: str, b: str) -> int:
    """Global alignment score with match +1, mismatch -1, gap -1."""
    previous = [-j for j in range(len(b) + 1)]
    for i, ca in enumerate(a, start=1):
        current = [-i]
        for j, cb in enumerate(b, start=1):
            current.append(
                max(
                    previous[j - 1] + (1 if ca == cb else -1),
                    previous[j] - 1,
                    current[j - 1] - 1,
                )
            )
        previous = current
    return previous[-1]


def needleman_wunsch(a: str, b: str) -> float:
    """Alignment score mapped affinely from [-max_len, min_len] to [0, 1]."""
    if not a and not b:
        return 1.0
    longest = max(len(a), len(b))
    shortest = min(len(a), len(b))
    score = _needleman_wunsch_score(a, b)
    return (score + longest) / (longest + shortest)


def _smith_waterman_score(a: str, b: str) -> int:
    """Best local alignment score with match +1, mismatch -1, gap -1."""
    best = 0
    previous = [0] * (len(b) + 1)
    for ca in a:
        current = [0]
        for j, cb in enumerate(b, start=1):
            value = max(
                0,
                previous[j - 1] + (1 if ca == cb else -1),
                previous[j] - 1,
                current[j - 1] - 1,
            )
            current.append(value)
            if value > best:
                best = value
        previous = current
    return best


def smith_waterman(a: str, b: str) -> float:
    if not a and not b:
        return 1.0
    shortest = min(len(a), len(b))
    if shortest == 0:
        return 0.0
    return _smith_waterman_score(a, b) / shortest


def _lcs_length(a: str, b: str) -> int:
    previous = [0] * (len(b) + 1)
    for ca in a:
        current = [0]
        for j, cb in enumerate(b, start=1):
            if ca == cb:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def lcs(a: str, b: str) -> float:
    """Longest common subsequence length over the longer length."""
    if not a and not b:
        return 1.0
    return _lcs_length(a, b) / max(len(a), len(b))


_CHAR_FUNCS = {
    "hamming": hamming,
    "levenshtein": levenshtein,
    "jaro_winkler": jaro_winkler,
    "needleman_wunsch": needleman_wunsch,
    "smith_waterman": smith_waterman,
    "lcs": lcs,
}


def char_similarity(algorithm: str, a: str, b: str) -> float:
    try:
        return _CHAR_FUNCS[algorithm](a, b)
    except KeyError:
        raise ValueError(f"unknown character algorithm {algorithm!r}") from None


# --------------------------------------------------------------------------
# Token-based algorithms (term-frequency vectors / token sets)


def jaccard(a_tokens, b_tokens) -> float:
    sa, sb = set(a_tokens), set(b_tokens)
    if not sa and not sb:
        return 1.0
    return len(sa & sb) / len(sa | sb)


def cosine(a_tokens, b_tokens) -> float:
    fa, fb = Counter(a_tokens), Counter(b_tokens)
    if not fa and not fb:
        return 1.0
    if not fa or not fb:
        return 0.0
    dot = sum(fa[t] * fb[t] for t in fa.keys() & fb.keys())
    norm_sq_a = sum(v * v for v in fa.values())
    norm_sq_b = sum(v * v for v in fb.values())
    # sqrt of the product keeps identical vectors at exactly 1.0
    return dot / math.sqrt(norm_sq_a * norm_sq_b)


def manhattan(a_tokens, b_tokens) -> float:
    """1 - L1 distance between frequency vectors over total token mass."""
    fa, fb = Counter(a_tokens), Counter(b_tokens)
    total = sum(fa.values()) + sum(fb.values())
    if total == 0:
        return 1.0
    distance = sum(abs(fa[t] - fb[t]) for t in fa.keys() | fb.keys())
    return 1.0 - distance / total


def tanimoto(a_tokens, b_tokens) -> float:
    """Tanimoto coefficient on term-frequency vectors (not on sets, which
    would make it collapse into Jaccard)."""
    fa, fb = Counter(a_tokens), Counter(b_tokens)
    if not fa and not fb:
        return 1.0
    dot = sum(fa[t] * fb[t] for t in fa.keys() & fb.keys())
    norm_sq_a = sum(v * v for v in fa.values())
    norm_sq_b = sum(v * v for v in fb.values())
    denominator = norm_sq_a + norm_sq_b - dot
    return dot / denominator if denominator else 0.0


_TOKEN_FUNCS = {
    "jaccard": jaccard,
    "cosine": cosine,
    "manhattan": manhattan,
    "tanimoto": tanimoto,
}


def token_similarity(algorithm: str, a_tokens, b_tokens) -> float:
    try:
        return _TOKEN_FUNCS[algorithm](a_tokens, b_tokens)
    except KeyError:
        raise ValueError(f"unknown token algorithm {algorithm!r}") from None


# --------------------------------------------------------------------------
# Feature-based algorithms (set operations)


def tversky(a_set, b_set, alpha: float = 0.5, beta: float = 0.5) -> float:
    """Tversky index; alpha = beta = 0.5 keeps it symmetric."""
    sa, sb = set(a_set), set(b_set)
    if not sa and not sb:
        return 1.0
    inter = len(sa & sb)
    denominator = inter + alpha * len(sa - sb) + beta * len(sb - sa)
    return inter / denominator if denominator else 0.0


def overlap(a_set, b_set) -> float:
    sa, sb = set(a_set), set(b_set)
    if not sa and not sb:
        return 1.0
    smallest = min(len(sa), len(sb))
    if smallest == 0:
        return 0.0
    return len(sa & sb) / smallest


_FEATURE_FUNCS = {"tversky": tversky, "overlap": overlap}


def feature_similarity(algorithm: str, a_set, b_set) -> float:
    try:
        return _FEATURE_FUNCS[algorithm](a_set, b_set)
    except KeyError:
        raise ValueError(f"unknown feature algorithm {algorithm!r}") from None


# --------------------------------------------------------------------------
# Phonetic algorithm: Match Rating Approach

_MRA_VOWELS = set("AEIOU")


def mra_codex(word: str) -> str:
    """Match Rating Approach encoding of a single word.

    Vowels are dropped except word-initially, doubled letters collapse,
    and long codes keep only the first three and last three letters.
    """
    letters = [ch for ch in word.upper() if ch.isalpha()]
    kept = []
    for i, ch in enumerate(letters):
        if i > 0 and ch in _MRA_VOWELS:
            continue
        kept.append(ch)
    collapsed = []
    for ch in kept:
        if collapsed and collapsed[-1] == ch:
            continue
        collapsed.append(ch)
    codex = "".join(collapsed)
    if len(codex) > 6:
        codex = codex[:3] + codex[-3:]
    return codex


def _mra_minimum_rating(length_sum: int) -> int:
    if length_sum <= 4:
        return 5
    if length_sum <= 7:
        return 4
    if length_sum <= 11:
        return 3
    return 2


def mra_comparison(a: str, b: str) -> bool | None:
    """Whether two words sound alike under the Match Rating Approach.

    Returns None when the codex lengths differ by 3 or more, in which case
    no comparison is possible.
    """
    codex_a, codex_b = mra_codex(a), mra_codex(b)
    if not codex_a and not codex_b:
        return True
    if not codex_a or not codex_b:
        return False
    if abs(len(codex_a) - len(codex_b)) >= 3:
        return None
    minimum = _mra_minimum_rating(len(codex_a) + len(codex_b))
    # Strip positionally identical letters left to right, then the
    # leftovers right to left.
    rest_a, rest_b = [], []
    for ca, cb in zip(codex_a, codex_b):
        if ca != cb:
            rest_a.append(ca)
            rest_b.append(cb)
    shorter = min(len(codex_a), len(codex_b))
    rest_a.extend(codex_a[shorter:])
    rest_b.extend(codex_b[shorter:])
    final_a, final_b = [], []
    for ca, cb in zip(reversed(rest_a), reversed(rest_b)):
        if ca != cb:
            final_a.append(ca)
            final_b.append(cb)
    shorter = min(len(rest_a), len(rest_b))
    final_a.extend(rest_a[: len(rest_a) - shorter])
    final_b.extend(rest_b[: len(rest_b) - shorter])
    rating = 6 - max(len(final_a), len(final_b))
    return rating >= minimum


def _phonetic_word_lists(words_a, words_b) -> float:
    if not words_a and not words_b:
        return 1.0
    if not words_a or not words_b:
        return 0.0
    pairs = max(len(words_a), len(words_b))
    total = 0.0
    for i in range(pairs):
        if i >= len(words_a) or i >= len(words_b):
            continue  # unmatched word scores 0
        if mra_comparison(words_a[i], words_b[i]) is True:
            total += 1.0
    return total / pairs


def phonetic_similarity(a: str, b: str) -> float:
    """Word-by-word Match Rating comparison, averaged over the longer
    word count; non-letters are stripped from each word first."""
    return _phonetic_word_lists(a.split(), b.split())


# --------------------------------------------------------------------------
# Hybrid metadata-coupling score


def similarity_profile(column_name: str, description: str) -> dict[str, float]:
    """All thirteen normalized scores for a name/description pair.

    Both inputs go through :func:`preprocess`; character algorithms then
    compare the space-joined token strings, token algorithms the token
    lists, feature algorithms the token sets and the phonetic algorithm
    the token lists word by word.
    """
    tokens_a = preprocess(column_name)
    tokens_b = preprocess(description)
    joined_a, joined_b = " ".join(tokens_a), " ".join(tokens_b)
    set_a, set_b = set(tokens_a), set(tokens_b)
    profile = {
        alg: _CHAR_FUNCS[alg](joined_a, joined_b) for alg in CHAR_ALGORITHMS
    }
    for alg in TOKEN_ALGORITHMS:
        profile[alg] = _TOKEN_FUNCS[alg](tokens_a, tokens_b)
    for alg in FEATURE_ALGORITHMS:
        profile[alg] = _FEATURE_FUNCS[alg](set_a, set_b)
    profile["mra"] = _phonetic_word_lists(tokens_a, tokens_b)
    return profile


def hybrid_score(column_name: str, description: str) -> float:
    """Equal-weight mean of the thirteen scores; 0 when the description
    is empty."""
    if not description.strip():
        return 0.0
    profile = similarity_profile(column_name, description)
    return math.fsum(profile.values()) / len(ALGORITHMS)
