"""Witness certificates for supremum-defined norms.

A witness is a tree recording which rule achieved a computed norm value:
the sup-norm base case, an admissible family (one child per (m_i, E_i)
pair), or a partition into at most m successively ordered pieces.  A witness
re-evaluates bottom-up against the original vector, so every reported value is
a machine-checkable lower bound for the norm it certifies.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .admissible import AdmissibleFamily
from .core import EQ_TOL, FiniteVector, IndexSet, f


@dataclass(frozen=True)
class SupWitness:
    value: float
    index: int | None = None  # attaining coordinate, None for the zero vector

    rule = "sup"


@dataclass(frozen=True)
class PartitionWitness:
    """Certifies a partition value: (sum of piece norms) / divisor.

    `m` is the piece budget; the divisor is m for triple norms and f(n_k)
    for the scale-sequence seminorms.
    """

    value: float
    m: int
    divisor: float
    pieces: tuple[tuple[IndexSet, "Witness"], ...]

    rule = "partition"


@dataclass(frozen=True)
class FamilyWitness:
    """Certifies a family value (1/f(l)) * sum of triple norms."""

    value: float
    pairs: tuple[tuple[int, IndexSet], ...]
    children: tuple[PartitionWitness, ...]

    rule = "family"


@dataclass(frozen=True)
class QuadraticWitness:
    """Certifies the square-sum branch of the scale-sequence norm.

    `head` holds one partition certificate per scale that genuinely splits
    the vector; beyond `tail_start` every scale exceeds the support size and
    contributes l1/f(n_k) exactly, aggregated analytically into `tail_l2`.
    """

    value: float
    head: tuple[tuple[int, PartitionWitness], ...]  # (n_k, certificate)
    tail_start: int  # first scale index covered by the analytic tail
    tail_l2: float

    rule = "l2sum"


Witness = Union[SupWitness, PartitionWitness, FamilyWitness, QuadraticWitness]


def evaluate_witness(w: Witness, x: FiniteVector) -> float:
    """Recompute the witness value bottom-up against x."""
    if isinstance(w, SupWitness):
        if w.index is None:
            return 0.0
        return abs(x.coefficient(w.index))
    if isinstance(w, PartitionWitness):
        total = sum(evaluate_witness(child, x.restrict(E)) for E, child in w.pieces)
        return total / w.divisor
    if isinstance(w, FamilyWitness):
        total = sum(
            evaluate_witness(child, x.restrict(E))
            for (_, E), child in zip(w.pairs, w.children)
        )
        return total / f(len(w.pairs))
    if isinstance(w, QuadraticWitness):
        ssq = sum(evaluate_witness(child, x) ** 2 for _, child in w.head)
        ssq += w.tail_l2 ** 2
        return ssq ** 0.5
    raise TypeError(f"not a witness: {w!r}")


def validate_witness(w: Witness, x: FiniteVector, tol: float = EQ_TOL) -> None:
    """Check structural soundness and that re-evaluation reproduces the value."""
    _validate_structure(w)
    got = evaluate_witness(w, x)
    if abs(got - w.value) > tol * max(1.0, abs(w.value)):
        raise ValueError(f"witness re-evaluates to {got}, claims {w.value}")


def _validate_structure(w: Witness) -> None:
    if isinstance(w, SupWitness):
        return
    if isinstance(w, PartitionWitness):
        sets = [E for E, _ in w.pieces]
        nonempty = [E for E in sets if not E.is_empty]
        if len(nonempty) > w.m:
            raise ValueError(f"partition has {len(nonempty)} pieces, allows {w.m}")
        for a, b in zip(nonempty, nonempty[1:]):
            if not a.precedes(b):
                raise ValueError("partition pieces are not in increasing order")
        for _, child in w.pieces:
            _validate_structure(child)
        return
    if isinstance(w, FamilyWitness):
        AdmissibleFamily(w.pairs).validate()
        if len(w.children) != len(w.pairs):
            raise ValueError("family witness needs one child per pair")
        for child in w.children:
            _validate_structure(child)
        return
    if isinstance(w, QuadraticWitness):
        for _, child in w.head:
            _validate_structure(child)
        return
    raise TypeError(f"not a witness: {w!r}")


def witness_to_json(w: Witness) -> dict:
    if isinstance(w, SupWitness):
        return {"rule": "sup", "value": w.value, "index": w.index}
    if isinstance(w, PartitionWitness):
        return {
            "rule": "partition",
            "value": w.value,
            "m": w.m,
            "divisor": w.divisor,
            "pieces": [[E.to_json(), witness_to_json(c)] for E, c in w.pieces],
        }
    if isinstance(w, FamilyWitness):
        return {
            "rule": "family",
            "value": w.value,
            "pairs": [[m, E.to_json()] for m, E in w.pairs],
            "children": [witness_to_json(c) for c in w.children],
        }
    if isinstance(w, QuadraticWitness):
        return {
            "rule": "l2sum",
            "value": w.value,
            "head": [[k, witness_to_json(c)] for k, c in w.head],
            "tail_start": w.tail_start,
            "tail_l2": w.tail_l2,
        }
    raise TypeError(f"not a witness: {w!r}")


def witness_from_json(obj: dict) -> Witness:
    rule = obj.get("rule")
    if rule == "sup":
        return SupWitness(value=float(obj["value"]), index=obj.get("index"))
    if rule == "partition":
        return PartitionWitness(
            value=float(obj["value"]),
            m=int(obj["m"]),
            divisor=float(obj.get("divisor", obj["m"])),
            pieces=tuple(
                (IndexSet.from_json(e), witness_from_json(c)) for e, c in obj["pieces"]
            ),
        )
    if rule == "family":
        return FamilyWitness(
            value=float(obj["value"]),
            pairs=tuple((int(m), IndexSet.from_json(e)) for m, e in obj["pairs"]),
            children=tuple(witness_from_json(c) for c in obj["children"]),
        )
    if rule == "l2sum":
        return QuadraticWitness(
            value=float(obj["value"]),
            head=tuple((int(k), witness_from_json(c)) for k, c in obj["head"]),
            tail_start=int(obj["tail_start"]),
            tail_l2=float(obj["tail_l2"]),
        )
    raise ValueError(f"unknown witness rule {rule!r}")
