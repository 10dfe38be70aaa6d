"""
Generalized polynomial Collatz maps

For fixed K, D with gcd(K, D) = 1 and a residue table R_r = K*r (mod D) over a
complete residue system modulo D, a term S is sent to (K*S + R_{S mod D}) / D,
which is a polynomial by construction. A residue may carry its own multiplier
K_r (coprime to D, with R_r = K_r*r); the map that divides multiples of x by x
and sends the rest to ((x+1)^3 A + 1)/x is the case K_0 = 1. Such maps can have
divergent trajectories; ``classify`` tells cycles, degree blow-up and
exhausted step budgets apart.
"""
import logging
import re
from typing import Dict, List, Optional, Tuple

from app.config import settings
from app.exceptions import (
    IncompleteResidueSystemError,
    InexactDivisionError,
    MatthewsConfigError,
    NonCoprimeError,
    ParameterRangeError,
    ResidueCongruenceError,
    ZeroPolynomialError,
)
from app.models.matthews_models import MatthewsConfig, OutcomeKind, TrajectoryOutcome
from app.services.gf2poly import Poly, _clmul, _divmod, parse_poly

logger = logging.getLogger(__name__)

_CONFIG_LINE = re.compile(r"^\s*(K|D|([KR])\[([^\]]+)\])\s*=\s*(.+?)\s*$")

# residue -> (K_r, R_r) on integer masks
Table = Dict[int, Tuple[int, int]]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _divmod(a, b)[1]
    return a


def _tables(cfg: MatthewsConfig) -> Tuple[int, Table]:
    table = {r.bits: (cfg.multiplier(r).bits, value.bits) for r, value in cfg.residue_map.items()}
    return cfg.D.bits, table


def _apply(d: int, table: Table, s: int) -> int:
    k, r_value = table[_divmod(s, d)[1]]
    q, rem = _divmod(_clmul(k, s) ^ r_value, d)
    if rem:
        raise InexactDivisionError(f"K*S + R is not divisible by D for S = {Poly(s)}")
    return q


def _deg(value: int) -> int:
    return value.bit_length() - 1


class MatthewsService:
    """Builds, iterates and classifies generalized maps"""

    def __init__(self):
        self.visited_limit = settings.matthews.visited_limit
        self.prefix_cap = settings.matthews.prefix_cap

    def make_config(
        self,
        K: Poly,
        D: Poly,
        residue_map: Dict[Poly, Poly],
        multipliers: Optional[Dict[Poly, Poly]] = None,
    ) -> MatthewsConfig:
        if not D:
            raise ZeroPolynomialError("make_config with D")
        multipliers = dict(multipliers or {})
        size = 1 << D.degree
        residues = {r.bits for r in residue_map}
        if len(residue_map) != size or residues != set(range(size)):
            raise IncompleteResidueSystemError(
                f"residue map must cover exactly the {size} residues modulo {D}, got {sorted(residues)}"
            )
        stray = [r for r in multipliers if r not in residue_map]
        if stray:
            raise IncompleteResidueSystemError(f"multipliers given for non-residues {stray} modulo {D}")
        for label, multiplier in [("K", K)] + [(f"K[{r}]", m) for r, m in multipliers.items()]:
            if _gcd(multiplier.bits, D.bits) != 1:
                raise NonCoprimeError(f"{label} = {multiplier} and D = {D} are not coprime")
        for r, value in residue_map.items():
            k = multipliers.get(r, K)
            if _divmod(value.bits, D.bits)[1] != _divmod(_clmul(k.bits, r.bits), D.bits)[1]:
                raise ResidueCongruenceError(f"R[{r}] = {value} is not congruent to {k}*{r} modulo {D}")
        return MatthewsConfig(K=K, D=D, residue_map=dict(residue_map), multipliers=multipliers)

    def step(self, cfg: MatthewsConfig, S: Poly) -> Poly:
        d, table = _tables(cfg)
        return Poly(_apply(d, table, S.bits))

    def classify(
        self,
        cfg: MatthewsConfig,
        seed: Poly,
        degree_threshold: int,
        step_cap: int,
    ) -> TrajectoryOutcome:
        """
        Iterate until a cycle is found, the degree exceeds the threshold, or the
        step cap is reached. The first ``visited_limit`` terms are tracked in a
        map; after that Brent's power-of-two scheme runs on exact values.
        """
        if degree_threshold < 1 or step_cap < 1:
            raise ParameterRangeError("degree threshold and step cap must be positive")
        d, table = _tables(cfg)
        prefix: List[int] = [seed.bits]
        max_degree = _deg(seed.bits)
        steps = 0

        def advance(value: int) -> int:
            nonlocal steps, max_degree
            value = _apply(d, table, value)
            steps += 1
            max_degree = max(max_degree, _deg(value))
            if len(prefix) < self.prefix_cap:
                prefix.append(value)
            return value

        def outcome(kind: OutcomeKind, **extra) -> TrajectoryOutcome:
            return TrajectoryOutcome(
                kind=kind,
                seed=seed,
                steps=steps,
                max_degree=max_degree if max_degree >= 0 else None,
                prefix=[Poly(v) for v in prefix],
                degree_profile=[_deg(v) if v else None for v in prefix],
                **extra,
            )

        def diverged(value: int) -> bool:
            return _deg(value) > degree_threshold

        if diverged(seed.bits):
            return outcome(OutcomeKind.DEGREE_DIVERGENCE, degree_threshold=degree_threshold, divergence_step=0)

        visited = {seed.bits: 0}
        current = seed.bits
        while steps < min(step_cap, self.visited_limit):
            current = advance(current)
            if diverged(current):
                return outcome(OutcomeKind.DEGREE_DIVERGENCE, degree_threshold=degree_threshold, divergence_step=steps)
            if current in visited:
                entry = visited[current]
                return self._cycle(outcome, cfg, seed, entry, steps - entry)
            visited[current] = steps
        visited.clear()

        if steps >= step_cap:
            return outcome(OutcomeKind.STEP_EXHAUSTED)

        # Brent from the current term
        power = lam = 1
        tortoise = current
        hare = advance(current)
        while tortoise != hare:
            if diverged(hare):
                return outcome(OutcomeKind.DEGREE_DIVERGENCE, degree_threshold=degree_threshold, divergence_step=steps)
            if steps >= step_cap:
                return outcome(OutcomeKind.STEP_EXHAUSTED)
            if power == lam:
                tortoise = hare
                power *= 2
                lam = 0
            hare = advance(hare)
            lam += 1

        # first index of the cycle, found by walking two pointers lam apart from the seed
        lead = seed.bits
        for _ in range(lam):
            lead = _apply(d, table, lead)
        trail = seed.bits
        entry = 0
        while trail != lead:
            trail = _apply(d, table, trail)
            lead = _apply(d, table, lead)
            entry += 1
        return self._cycle(outcome, cfg, seed, entry, lam)

    def _cycle(self, outcome, cfg: MatthewsConfig, seed: Poly, entry: int, length: int) -> TrajectoryOutcome:
        d, table = _tables(cfg)
        value = seed.bits
        for _ in range(entry):
            value = _apply(d, table, value)
        members = []
        for _ in range(min(length, self.prefix_cap)):
            members.append(Poly(value))
            value = _apply(d, table, value)
        return outcome(OutcomeKind.CYCLE, cycle_entry=entry, cycle_length=length, cycle_members=members)

    def census(
        self,
        cfg: MatthewsConfig,
        max_seed_degree: int,
        degree_threshold: int,
        step_cap: int,
    ) -> List[TrajectoryOutcome]:
        """Classify every nonzero seed of degree <= max_seed_degree, ascending mask order"""
        if max_seed_degree < 0:
            raise ParameterRangeError("max_seed_degree must be >= 0")
        outcomes = [
            self.classify(cfg, Poly(mask), degree_threshold, step_cap)
            for mask in range(1, 1 << (max_seed_degree + 1))
        ]
        counts: Dict[str, int] = {}
        for result in outcomes:
            counts[result.kind.value] = counts.get(result.kind.value, 0) + 1
        logger.info(f"Census over {len(outcomes)} seeds: {counts}")
        return outcomes

    def parse_config(self, text: str) -> MatthewsConfig:
        """
        Parse the config text format

            K=<poly>
            D=<poly>
            R[<residue>]=<poly>     (one line per residue)
            K[<residue>]=<poly>     (optional, residue-specific multiplier)

        Blank lines and lines starting with '#' are ignored.
        """
        K: Optional[Poly] = None
        D: Optional[Poly] = None
        tables: Dict[str, Dict[Poly, Poly]] = {"R": {}, "K": {}}
        for number, line in enumerate(text.splitlines(), 1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            match = _CONFIG_LINE.match(line)
            if not match:
                raise MatthewsConfigError(f"line {number}: expected K=, D=, R[r]= or K[r]=, got {line!r}")
            key, indexed, residue, value = match.groups()
            poly = parse_poly(value)
            if key == "K":
                K = poly
            elif key == "D":
                D = poly
            else:
                r = parse_poly(residue)
                if r in tables[indexed]:
                    raise MatthewsConfigError(f"line {number}: {indexed}[{r}] given twice")
                tables[indexed][r] = poly
        if K is None or D is None:
            raise MatthewsConfigError("config needs both K= and D= lines")
        return self.make_config(K, D, tables["R"], tables["K"])

    def load_config(self, path: str) -> MatthewsConfig:
        with open(path, "r", encoding="utf-8") as f:
            return self.parse_config(f.read())


# Create singleton instance
matthews_service = MatthewsService()
