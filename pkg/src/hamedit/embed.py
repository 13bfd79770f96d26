"""The four embedding families from Hamming space into edit space.

* misaligner embedding: codewords of a misaligner are laid down in the order
  given by a locally self-matching string; input bits instantiate the
  wildcards (rate 1/t, binary in and out);
* third-rate embedding: input symbols interleaved with blocks of a locally
  self-matching string over a large alphabet (rate approaching 1/3);
* product embedding: input padded with a fixed symbol and paired pointwise
  with a locally self-matching string over a second alphabet (bit-rate
  approaching 1, output alphabet is a product);
* folklore baseline: a uniformly random binary block after every input bit
  (rate Theta(1/log n), isometric only with high probability).

Specs are immutable; ``embed`` is a pure function of (spec, input).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .lsm import LsmString, LsmParams, generate, min_alphabet_size, verify_lsm
from .metrics import WILDCARD, Symbols, format_symbols, parse_symbols, symbols_of
from .misaligner import Misaligner, MisalignerParams, required_t
from .rng import SplitMix64

SPEC_FORMAT = "hamedit-embedding-spec"
SPEC_VERSION = 1


def _as_rational(x) -> Fraction:
    """Exact rational from int/str/Fraction; floats go through their shortest
    decimal repr so 0.1 means 1/10, not its binary expansion."""
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


# ---------------------------------------------------------------------------
# Misaligner embedding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MisalignerEmbedding:
    misaligner: Misaligner
    epsilon: float
    n: int
    seed: int
    lsm: LsmString
    template: tuple[int, ...]  # length t*n with exactly n wildcards

    family = "misaligner"

    @property
    def input_alphabet(self) -> int:
        return 2

    @property
    def output_alphabet(self) -> int:
        return 2

    @property
    def output_length(self) -> int:
        return len(self.template)


def _misaligner_template(mis: Misaligner, lsm_value: Sequence[int], n: int) -> tuple[int, ...]:
    t = mis.params.t
    concat: list[int] = []
    for sym in lsm_value:
        concat.extend(mis.codewords[sym])  # symbol -> codeword, index order
    template = tuple(concat[: t * n])
    wilds = sum(1 for s in template if s == WILDCARD)
    if len(template) != t * n or wilds != n:
        raise AssertionError(
            f"template invariant broken: length {len(template)} wildcards {wilds}"
        )
    return template


def build_misaligner_embedding(
    mis: Misaligner, epsilon: float, n: int, seed: int
) -> MisalignerEmbedding:
    """Instantiate the misaligner embedding for inputs of length n.

    Requires t >= 1/((1-eps)*alpha - 1/(3m-1)); the locally self-matching
    string is drawn over an alphabet of one symbol per codeword. When the
    codeword count is below the guaranteed-existence bound the generator runs
    in its empirical small-alphabet mode and still verifies the result.
    """
    p = mis.params
    if n < 1:
        raise ValueError("n must be positive")
    needed = required_t(p.m, p.alpha, epsilon)
    if needed > p.t:
        raise ValueError(
            f"isometry threshold violated: t={p.t} but alpha={p.alpha}, "
            f"epsilon={epsilon} require t >= ceil(1/((1-eps)*alpha - 1/(3m-1))) = {needed}"
        )
    big_n = -(-p.t * n // p.m)  # smallest N with N*m >= t*n
    lsm = generate(
        epsilon,
        p.k,
        big_n,
        seed,
        strict_alphabet=p.k >= min_alphabet_size(epsilon),
    )
    template = _misaligner_template(mis, lsm.value, n)
    return MisalignerEmbedding(
        misaligner=mis, epsilon=epsilon, n=n, seed=seed, lsm=lsm, template=template
    )


# ---------------------------------------------------------------------------
# Third-rate embedding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThirdRateEmbedding:
    rho: Fraction
    rate_target: Fraction  # R = 1/3 - rho = a/b, reduced
    n: int
    seed: int
    sigma: int
    block_lengths: tuple[int, ...]  # lengths of w^(1..n)
    lsm: LsmString

    family = "third"

    @property
    def q(self) -> int:
        return self.rate_target.denominator // self.rate_target.numerator

    @property
    def r(self) -> int:
        a, b = self.rate_target.numerator, self.rate_target.denominator
        return b - a * (b // a)

    @property
    def m_blocks(self) -> int:
        return self.n // self.rate_target.numerator

    @property
    def n_prime(self) -> int:
        return sum(self.block_lengths)

    @property
    def input_alphabet(self) -> int:
        return self.sigma

    @property
    def output_alphabet(self) -> int:
        return self.sigma

    @property
    def output_length(self) -> int:
        return self.n + self.n_prime


def third_rate_alphabet(rate_target: Fraction) -> int:
    """Alphabet size ceil(5e^2 / eps'^2) with eps' = (1-3R)/(2(1-R))."""
    eps_prime = (1 - 3 * rate_target) / (2 * (1 - rate_target))
    return math.ceil(5 * math.e**2 / float(eps_prime) ** 2)


def build_third_rate_embedding(rho, n: int, seed: int) -> ThirdRateEmbedding:
    """Interleaved large-alphabet embedding with rate at least 1/3 - rho."""
    rho = _as_rational(rho)
    if not 0 < rho < Fraction(1, 3):
        raise ValueError(f"rho must lie in (0, 1/3), got {rho}")
    if n < 1:
        raise ValueError("n must be positive")
    rate = Fraction(1, 3) - rho
    a, b = rate.numerator, rate.denominator
    q, r = b // a, b - a * (b // a)
    m_blocks = n // a
    n_prime = m_blocks * (q - 1 + r) + (n - m_blocks) * (q - 1)
    eps_prime = (1 - 3 * rate) / (2 * (1 - rate))
    sigma = third_rate_alphabet(rate)
    lsm = generate(float(eps_prime), sigma, n_prime, seed)
    block_lengths = tuple(
        q - 1 + r if i % a == 0 else q - 1 for i in range(1, n + 1)
    )
    assert sum(block_lengths) == n_prime
    return ThirdRateEmbedding(
        rho=rho,
        rate_target=rate,
        n=n,
        seed=seed,
        sigma=sigma,
        block_lengths=block_lengths,
        lsm=lsm,
    )


# ---------------------------------------------------------------------------
# Product embedding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProductEmbedding:
    rho: Fraction
    n: int
    seed: int
    m_pad: int
    sigma_in: int
    sigma_prime: int
    pad_symbol: int
    lsm: LsmString

    family = "product"
    C_CONST = 10

    @property
    def eps(self) -> Fraction:
        return Fraction(1, self.m_pad)

    @property
    def input_alphabet(self) -> int:
        return self.sigma_in

    @property
    def output_alphabet(self) -> int:
        return self.sigma_in * self.sigma_prime

    @property
    def output_length(self) -> int:
        return self.n + self.n // (self.m_pad - 1)


def build_product_embedding(rho, n: int, seed: int) -> ProductEmbedding:
    """Product-alphabet embedding with bit-rate at least 1 - rho."""
    rho = _as_rational(rho)
    if not 0 < rho < 1:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    if n < 1:
        raise ValueError("n must be positive")
    c = ProductEmbedding.C_CONST
    m_pad_f = (c * (1 - rho) + 1) / rho
    m_pad = -(-m_pad_f.numerator // m_pad_f.denominator)  # ceil
    eps_prime = Fraction(1, 2 * m_pad)
    sigma_in = m_pad**m_pad  # 2^((1/eps) log2(1/eps)) with eps = 1/m_pad
    sigma_prime = math.ceil(5 * math.e**2 / float(eps_prime) ** 2)
    big_n = n + n // (m_pad - 1)
    lsm = generate(float(eps_prime), sigma_prime, big_n, seed)
    return ProductEmbedding(
        rho=rho,
        n=n,
        seed=seed,
        m_pad=m_pad,
        sigma_in=sigma_in,
        sigma_prime=sigma_prime,
        pad_symbol=0,
        lsm=lsm,
    )


def pad_input(spec: ProductEmbedding, xs: Sequence[int]) -> list[int]:
    """Insert the pad symbol after every (m_pad - 1) input symbols."""
    out: list[int] = []
    for i, sym in enumerate(xs, start=1):
        out.append(sym)
        if i % (spec.m_pad - 1) == 0:
            out.append(spec.pad_symbol)
    return out


# ---------------------------------------------------------------------------
# Folklore baseline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FolkloreEmbedding:
    n: int
    c: float
    seed: int
    block_len: int
    pad_blocks: tuple[tuple[int, ...], ...]

    family = "folklore"

    @property
    def input_alphabet(self) -> int:
        return 2

    @property
    def output_alphabet(self) -> int:
        return 2

    @property
    def output_length(self) -> int:
        return self.n * (1 + self.block_len)


def build_folklore(n: int, c: float, seed: int) -> FolkloreEmbedding:
    """Random-padding baseline: a c*log2(n)-bit random block after each input
    bit. Isometric with high probability only; never claimed exact."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if c < 1:
        raise ValueError("c must be at least 1")
    block_len = math.ceil(c * math.log2(n))
    rng = SplitMix64(seed)
    pads = tuple(
        tuple(rng.below(2) for _ in range(block_len)) for _ in range(n)
    )
    return FolkloreEmbedding(n=n, c=c, seed=seed, block_len=block_len, pad_blocks=pads)


# ---------------------------------------------------------------------------
# Embedding application and rate
# ---------------------------------------------------------------------------

EmbeddingSpec = Union[MisalignerEmbedding, ThirdRateEmbedding, ProductEmbedding, FolkloreEmbedding]


def embed(spec: EmbeddingSpec, x: Symbols) -> tuple[int, ...]:
    """Apply an embedding spec to an input string."""
    xs = symbols_of(x)
    if len(xs) != spec.n:
        raise ValueError(f"input length {len(xs)} does not match spec n={spec.n}")
    for s in xs:
        if not 0 <= s < spec.input_alphabet:
            raise ValueError(f"symbol {s} outside input alphabet of size {spec.input_alphabet}")

    if isinstance(spec, MisalignerEmbedding):
        it = iter(xs)
        return tuple(next(it) if s == WILDCARD else s for s in spec.template)

    if isinstance(spec, ThirdRateEmbedding):
        out: list[int] = []
        pos = 0
        for i in range(spec.n):
            out.append(xs[i])
            ln = spec.block_lengths[i]
            out.extend(spec.lsm.value[pos : pos + ln])
            pos += ln
        return tuple(out)

    if isinstance(spec, ProductEmbedding):
        padded = pad_input(spec, xs)
        return tuple(
            a * spec.sigma_prime + w for a, w in zip(padded, spec.lsm.value)
        )

    if isinstance(spec, FolkloreEmbedding):
        out = []
        for i in range(spec.n):
            out.append(xs[i])
            out.extend(spec.pad_blocks[i])
        return tuple(out)

    raise TypeError(f"unknown spec type {type(spec)!r}")


def embed_fn(spec: EmbeddingSpec):
    """The embedding as a plain callable on symbol sequences."""
    return lambda x: embed(spec, x)


def rate(spec: EmbeddingSpec) -> float:
    """n*log2|in| / (N*log2|out|), reported as a float.

    log2|out| for the product family is computed as
    log2|sigma_in| + log2|sigma_prime| exactly in the exponent arithmetic of
    :func:`rate_meets`; here the float rendering is enough.
    """
    n, big_n = spec.n, spec.output_length
    a, b = spec.input_alphabet, spec.output_alphabet
    if a == b:
        return n / big_n
    return (n * math.log2(a)) / (big_n * math.log2(b))


def rate_meets(spec: EmbeddingSpec, threshold: Fraction) -> bool:
    """Exact test rate(spec) >= threshold via the integer power comparison
    |in|^(q*n) >= |out|^(p*N) for threshold p/q."""
    p, q = threshold.numerator, threshold.denominator
    n, big_n = spec.n, spec.output_length
    return spec.input_alphabet ** (q * n) >= spec.output_alphabet ** (p * big_n)


# ---------------------------------------------------------------------------
# Persistence: tagged JSON, versioned
# ---------------------------------------------------------------------------


def _lsm_to_json(s: LsmString) -> dict:
    return {
        "epsilon": s.params.epsilon,
        "sigma": s.params.sigma_size,
        "n": len(s.value),
        "seed": s.params.seed,
        "resampleCount": s.resample_count,
        "symbols": list(s.value),
    }


def _lsm_from_json(d: dict) -> LsmString:
    value = tuple(d["symbols"])
    params = LsmParams.make(d["epsilon"], d["sigma"], d["seed"])
    return LsmString(
        params=params,
        value=value,
        verified=verify_lsm(value, d["epsilon"]).ok,
        resample_count=d["resampleCount"],
    )


def spec_to_json(spec: EmbeddingSpec) -> dict:
    doc: dict = {"format": SPEC_FORMAT, "version": SPEC_VERSION, "family": spec.family}
    if isinstance(spec, MisalignerEmbedding):
        p = spec.misaligner.params
        doc.update(
            m=p.m,
            k=p.k,
            t=p.t,
            alpha=p.alpha,
            epsilon=spec.epsilon,
            n=spec.n,
            seed=spec.seed,
            codewords=[format_symbols(c, compact=True) for c in spec.misaligner.codewords],
            lsm=_lsm_to_json(spec.lsm),
        )
    elif isinstance(spec, ThirdRateEmbedding):
        doc.update(
            rho=str(spec.rho),
            n=spec.n,
            seed=spec.seed,
            sigma=spec.sigma,
            lsm=_lsm_to_json(spec.lsm),
        )
    elif isinstance(spec, ProductEmbedding):
        doc.update(
            rho=str(spec.rho),
            n=spec.n,
            seed=spec.seed,
            mPad=spec.m_pad,
            sigmaIn=spec.sigma_in,
            sigmaPrime=spec.sigma_prime,
            padSymbol=spec.pad_symbol,
            lsm=_lsm_to_json(spec.lsm),
        )
    elif isinstance(spec, FolkloreEmbedding):
        doc.update(
            n=spec.n,
            c=spec.c,
            seed=spec.seed,
            blockLen=spec.block_len,
            padBlocks=[list(b) for b in spec.pad_blocks],
        )
    else:
        raise TypeError(f"unknown spec type {type(spec)!r}")
    return doc


def spec_from_json(doc: dict, misaligner_loader=None) -> EmbeddingSpec:
    if doc.get("format") != SPEC_FORMAT:
        raise ValueError(f"not an embedding spec document: format={doc.get('format')!r}")
    if doc.get("version") != SPEC_VERSION:
        raise ValueError(f"unsupported spec version {doc.get('version')!r}")
    family = doc.get("family")
    if family == "misaligner":
        if "codewords" in doc:
            codewords = tuple(parse_symbols(c, compact_ok=True) for c in doc["codewords"])
        elif "misalignerFile" in doc and misaligner_loader is not None:
            codewords = misaligner_loader(doc["misalignerFile"]).codewords
        else:
            raise ValueError("misaligner spec carries neither codewords nor a loadable reference")
        mis = Misaligner(
            MisalignerParams(doc["m"], doc["k"], doc["t"], doc["alpha"]), codewords
        )
        lsm = _lsm_from_json(doc["lsm"])
        template = _misaligner_template(mis, lsm.value, doc["n"])
        return MisalignerEmbedding(
            misaligner=mis,
            epsilon=doc["epsilon"],
            n=doc["n"],
            seed=doc["seed"],
            lsm=lsm,
            template=template,
        )
    if family == "third":
        rho = Fraction(doc["rho"])
        rate_target = Fraction(1, 3) - rho
        a, b = rate_target.numerator, rate_target.denominator
        q, r = b // a, b - a * (b // a)
        n = doc["n"]
        block_lengths = tuple(q - 1 + r if i % a == 0 else q - 1 for i in range(1, n + 1))
        return ThirdRateEmbedding(
            rho=rho,
            rate_target=rate_target,
            n=n,
            seed=doc["seed"],
            sigma=doc["sigma"],
            block_lengths=block_lengths,
            lsm=_lsm_from_json(doc["lsm"]),
        )
    if family == "product":
        return ProductEmbedding(
            rho=Fraction(doc["rho"]),
            n=doc["n"],
            seed=doc["seed"],
            m_pad=doc["mPad"],
            sigma_in=doc["sigmaIn"],
            sigma_prime=doc["sigmaPrime"],
            pad_symbol=doc["padSymbol"],
            lsm=_lsm_from_json(doc["lsm"]),
        )
    if family == "folklore":
        return FolkloreEmbedding(
            n=doc["n"],
            c=doc["c"],
            seed=doc["seed"],
            block_len=doc["blockLen"],
            pad_blocks=tuple(tuple(b) for b in doc["padBlocks"]),
        )
    raise ValueError(f"unknown embedding family {family!r}")


def dumps_spec(spec: EmbeddingSpec) -> str:
    return json.dumps(spec_to_json(spec), sort_keys=True, separators=(",", ":")) + "\n"


def loads_spec(text: str, misaligner_loader=None) -> EmbeddingSpec:
    return spec_from_json(json.loads(text), misaligner_loader=misaligner_loader)
