"""Structured results shared by the verifiers and the command line."""

from typing import Any, ClassVar, Dict, List, Optional

from pydantic import BaseModel, Field, computed_field


class CheckResult(BaseModel):
    """One family of identities and how many instances of it were checked."""

    name: str
    instances: int = 0
    failures: int = 0

    @computed_field
    @property
    def passed(self) -> bool:
        return self.failures == 0


class Counterexample(BaseModel):
    check: str
    instance: str
    lhs: str
    rhs: str


class Report(BaseModel):
    """Outcome of a verification suite over a bounded depth."""

    suite: str
    shift: str
    depth: int
    checks: List[CheckResult] = Field(default_factory=list)
    counterexamples: List[Counterexample] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)

    max_counterexamples: ClassVar[int] = 20

    @computed_field
    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def _check(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        check = CheckResult(name=name)
        self.checks.append(check)
        return check

    def record(self, name: str, ok: bool, instance: str = "", lhs: object = "", rhs: object = "") -> bool:
        check = self._check(name)
        check.instances += 1
        if not ok:
            check.failures += 1
            if len(self.counterexamples) < self.max_counterexamples:
                self.counterexamples.append(Counterexample(check=name, instance=instance, lhs=str(lhs), rhs=str(rhs)))
        return ok

    def merge(self, other: "Report") -> None:
        for check in other.checks:
            mine = self._check(check.name)
            mine.instances += check.instances
            mine.failures += check.failures
        room = self.max_counterexamples - len(self.counterexamples)
        self.counterexamples.extend(other.counterexamples[: max(room, 0)])
        self.notes.extend(other.notes)


class BratteliDiagram(BaseModel):
    tower: str
    sizes: List[int]
    incidence: List[List[List[int]]]
    stable: bool
    stable_from: Optional[int] = None
    stable_matrix: Optional[List[List[int]]] = None


class K0Presentation(BaseModel):
    tower: str
    sizes: List[int]
    stationary: bool
    truncated: bool
    group: Optional[str] = None
    matrix: Optional[List[List[int]]] = None
    determinant: Optional[int] = None
    invariant_factors: Optional[List[int]] = None
    order_unit: Optional[List[int]] = None
    note: str = ""


class LanguageListing(BaseModel):
    shift: str
    length: int
    count: int
    words: List[str]


class AtomEntry(BaseModel):
    index: int
    nu: str
    tail_class: int
    extensions: List[str]


class AtomListing(BaseModel):
    shift: str
    k: int
    l: int
    count: int
    classes: int
    atoms: List[AtomEntry]


class TailListing(BaseModel):
    shift: str
    realizable: List[str]
    window: Optional[str] = None
    window_type: Optional[str] = None
    stable: Optional[bool] = None
    candidates: List[str] = Field(default_factory=list)


class ShiftInvariants(BaseModel):
    shift: str
    m: List[int]
    diagonal_atoms: List[int]
    a_tower: BratteliDiagram
    diagonal_tower: BratteliDiagram
    k0: K0Presentation


class InvariantReport(BaseModel):
    depth: int
    source: ShiftInvariants
    target: ShiftInvariants
    m_equal: bool
    certificate: Optional[Dict[str, Any]] = None
    level_lag: Optional[int] = None
    notes: List[str] = Field(default_factory=list)


class RewriteResult(BaseModel):
    shift: str
    expression: str
    normal_form: List[str]
    compared_with: Optional[str] = None
    other_normal_form: Optional[List[str]] = None
    equal: Optional[bool] = None


class PullbackListing(BaseModel):
    """Images of the target's cylinder functions and generators under a certificate."""

    source: str
    target: str
    cylinders: Dict[str, str]
    shifted_cylinders: Dict[str, str]
    generator_images: Dict[str, List[str]]
