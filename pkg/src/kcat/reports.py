"""Check reports: the verdict of one axiom equation plus a counterexample witness."""

from enum import Enum, auto
from typing import Any, Dict, List, Optional, Tuple


class Verdict(Enum):
    """Outcome of a single axiom check."""
    PASS = auto()
    FAIL = auto()


class Witness:
    """
    Where two composed cells differ.

    For entrywise failures ``row``/``col`` hold the first differing basis
    multi-indices (lexicographic) and ``lhs``/``rhs`` the two exact values.
    For type-level failures only ``reason`` is set.
    """

    def __init__(self, reason: str, row: Optional[Tuple[int, ...]] = None,
                 col: Optional[Tuple[int, ...]] = None, lhs: Any = None, rhs: Any = None):
        self._reason = reason
        self._row = row
        self._col = col
        self._lhs = lhs
        self._rhs = rhs

    @property
    def reason(self) -> str:
        """Get the failure kind (EntryMismatch, ShapeMismatch, ...)."""
        return self._reason

    @property
    def row(self) -> Optional[Tuple[int, ...]]:
        """Get the codomain multi-index of the differing entry."""
        return self._row

    @property
    def col(self) -> Optional[Tuple[int, ...]]:
        """Get the domain multi-index of the differing entry."""
        return self._col

    @property
    def lhs(self) -> Any:
        """Get the left-hand side value at the witness index."""
        return self._lhs

    @property
    def rhs(self) -> Any:
        """Get the right-hand side value at the witness index."""
        return self._rhs

    def to_dict(self) -> Dict[str, Any]:
        return {
            'reason': self._reason,
            'row': list(self._row) if self._row is not None else None,
            'col': list(self._col) if self._col is not None else None,
            'lhs': None if self._lhs is None else str(self._lhs),
            'rhs': None if self._rhs is None else str(self._rhs),
        }

    def __repr__(self) -> str:
        if self._row is None:
            return f"Witness({self._reason})"
        return f"Witness({self._reason} at {self._row}<-{self._col}: {self._lhs} != {self._rhs})"


class CheckReport:
    """Verdict of one axiom, keyed by a stable axiom id."""

    def __init__(self, axiom_id: str, witness: Optional[Witness] = None,
                 elapsed: float = 0.0, domain: Optional[str] = None):
        self._axiom_id = axiom_id
        self._witness = witness
        self._elapsed = elapsed
        self._domain = domain

    @property
    def axiom_id(self) -> str:
        """Get the axiom id."""
        return self._axiom_id

    @property
    def verdict(self) -> Verdict:
        """Get the verdict; FAIL exactly when a witness is present."""
        return Verdict.PASS if self._witness is None else Verdict.FAIL

    @property
    def passed(self) -> bool:
        """Check whether the axiom holds."""
        return self._witness is None

    @property
    def witness(self) -> Optional[Witness]:
        """Get the counterexample, if any."""
        return self._witness

    @property
    def elapsed(self) -> float:
        """Get the evaluation time in seconds."""
        return self._elapsed

    @property
    def domain(self) -> Optional[str]:
        """Get the quantification domain of a family-quantified check."""
        return self._domain

    def renamed(self, axiom_id: str, elapsed: Optional[float] = None,
                domain: Optional[str] = None) -> 'CheckReport':
        """Return the same verdict under another axiom id."""
        return CheckReport(axiom_id, self._witness,
                           self._elapsed if elapsed is None else elapsed,
                           domain if domain is not None else self._domain)

    def to_dict(self, timings: bool = True) -> Dict[str, Any]:
        data = {
            'axiom': self._axiom_id,
            'verdict': self.verdict.name.lower(),
            'witness': self._witness.to_dict() if self._witness else None,
        }
        if self._domain is not None:
            data['domain'] = self._domain
        if timings:
            data['elapsed'] = round(self._elapsed, 6)
        return data

    def __repr__(self) -> str:
        tail = "" if self.passed else f" {self._witness!r}"
        return f"CheckReport({self._axiom_id!r}, {self.verdict.name}{tail})"


# Ordered list of reports produced by one checker.
AxiomSuiteReport = List[CheckReport]


def suite_passed(reports: AxiomSuiteReport) -> bool:
    """True when every report in the suite passes."""
    return all(r.passed for r in reports)


def failed_ids(reports: AxiomSuiteReport) -> List[str]:
    """Axiom ids of the failing reports, in suite order."""
    return [r.axiom_id for r in reports if not r.passed]
