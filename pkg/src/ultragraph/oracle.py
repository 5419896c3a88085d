"""A decidable stand-in for a fixed nonprincipal ultrafilter on the naturals.

Membership questions "is this index set large?" are answered exactly on the
algebra of finite, cofinite and eventually periodic sets. The choice of
ultrafilter is encoded by a residue tower: one residue c_m per modulus m,
compatible in the sense that c_{m'} = c_m (mod m) whenever m divides m'.
An eventually periodic set with period P is accepted exactly when it
contains the residue class c_P (mod P) beyond its preperiod. Because all
decisions come from a single tower, the ultrafilter laws (complementarity,
closure under supersets and intersections, rejection of every finite set)
hold unconditionally, even after pinning.

Pins let the user steer toward a different ultrafilter. A pin on an exact
set is translated into a constraint on the tower: the set of admissible
residues modulo the lcm of all pin periods. Pinning is rejected with
``InconsistentPin`` when no residue survives, which is exactly the finite
intersection property check (the intersection of all required-in sets must
be infinite). The effective tower is re-derived deterministically as the
smallest admissible integer, preferring integers that agree with the
configured base residues.

Pins on sampled sets cannot constrain the tower; they are kept as literal
overrides, matched by pointwise agreement up to the sampled horizon, and
their consistency is checked only on that window. That trust boundary is
the same one sampled sets carry everywhere else.

Concurrency: oracles are cheap immutable values. ``pin`` returns a new
oracle; configure first, then share freely between readers.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import (
    InconsistentPin,
    IncompatibleTower,
    InvariantBreach,
    NotAPartition,
    Undecidable,
)
from .indexsets import COFINITE, FINITE, PERIODIC, SAMPLED, IndexSet


class Membership(Enum):
    IN = "in"
    OUT = "out"

    def flipped(self) -> "Membership":
        return Membership.OUT if self is Membership.IN else Membership.IN


@dataclass(frozen=True)
class Pin:
    target: IndexSet
    verdict: Membership


@dataclass(frozen=True)
class AuditEntry:
    """One oracle decision that influenced a verdict."""

    subject: str
    verdict: str
    context: str

    def render(self) -> str:
        return f"{self.context}: {self.subject} -> {self.verdict}"


def _crt_merge(mod_a: int, res_a: int, mod_b: int, res_b: int) -> tuple[int, int]:
    g = gcd(mod_a, mod_b)
    if (res_a - res_b) % g != 0:
        raise IncompatibleTower(
            f"residue {res_a} (mod {mod_a}) conflicts with {res_b} (mod {mod_b})"
        )
    m = lcm(mod_a, mod_b)
    # Step res_a through multiples of mod_a until it also fits res_b.
    step = mod_a
    r = res_a
    while r % mod_b != res_b % mod_b:
        r += step
    return m, r % m


class FilterOracle:
    """Decides index-set membership for one fixed nonprincipal ultrafilter."""

    def __init__(
        self,
        tower: Iterable[tuple[int, int]] = (),
        pins: Iterable[tuple[IndexSet, Membership]] = (),
        audit: list[AuditEntry] | None = None,
    ):
        self._base_mod, self._base_res = 1, 0
        for modulus, residue in tower:
            if modulus < 1:
                raise IncompatibleTower(f"modulus {modulus} must be positive")
            self._base_mod, self._base_res = _crt_merge(
                self._base_mod, self._base_res, modulus, residue % modulus
            )
        self._exact_pins: tuple[Pin, ...] = ()
        self._sampled_pins: tuple[Pin, ...] = ()
        self.audit = audit
        self._refresh()
        for target, verdict in pins:
            self._absorb_pin(Pin(target, verdict))

    # -- configuration -------------------------------------------------------

    def pin(self, target: IndexSet, verdict: Membership) -> "FilterOracle":
        """Return a new oracle honoring the pin; raise InconsistentPin if the
        pin cannot coexist with the existing ones."""
        clone = FilterOracle.__new__(FilterOracle)
        clone._base_mod, clone._base_res = self._base_mod, self._base_res
        clone._exact_pins = self._exact_pins
        clone._sampled_pins = self._sampled_pins
        clone.audit = self.audit
        clone._absorb_pin(Pin(target, verdict))
        return clone

    def _absorb_pin(self, pin: Pin) -> None:
        if pin.target.kind == SAMPLED:
            self._sampled_pins = self._sampled_pins + (pin,)
        else:
            self._exact_pins = self._exact_pins + (pin,)
        try:
            self._refresh()
            self._check_sampled_fip()
        except InconsistentPin:
            if pin.target.kind == SAMPLED:
                self._sampled_pins = self._sampled_pins[:-1]
            else:
                self._exact_pins = self._exact_pins[:-1]
            self._refresh()
            raise

    def _refresh(self) -> None:
        """Recompute the admissible residues and the selected tower."""
        modulus = self._base_mod
        for pin in self._exact_pins:
            period = len(pin.target.cycle) if pin.target.kind == PERIODIC else 1
            modulus = lcm(modulus, period)
        allowed = []
        for r in range(modulus):
            ok = True
            for pin in self._exact_pins:
                inside = pin.target.class_inside(r, modulus)
                if inside != (pin.verdict is Membership.IN):
                    ok = False
                    break
            if ok:
                allowed.append(r)
        if not allowed:
            raise InconsistentPin(
                "pins leave no admissible residue class; the required sets "
                "have a finite intersection"
            )
        preferred = [r for r in allowed if r % self._base_mod == self._base_res]
        self._modulus = modulus
        self._selected = min(preferred) if preferred else min(allowed)

    def _check_sampled_fip(self) -> None:
        """Windowed finite-intersection check once sampled pins participate."""
        if not self._sampled_pins:
            return
        required: list[IndexSet] = []
        for pin in self._exact_pins + self._sampled_pins:
            required.append(
                pin.target if pin.verdict is Membership.IN else pin.target.complement()
            )
        window = min(s.horizon for s in required if s.kind == SAMPLED)
        for n in range(window + 1):
            if all(s.contains(n) for s in required):
                return
        raise InconsistentPin(
            f"pinned sets have empty intersection on the checkable window [0, {window}]"
        )

    # -- queries --------------------------------------------------------------

    def selected_residue(self, modulus: int) -> int:
        """The residue class the tower selects at the given modulus."""
        if modulus < 1:
            raise ValueError("modulus must be positive")
        return self._selected % modulus

    def _record(self, subject: IndexSet, verdict: Membership, context: str) -> None:
        if self.audit is not None:
            self.audit.append(AuditEntry(subject.describe(), verdict.value, context))

    def decide(self, subject: IndexSet, context: str = "decide") -> Membership:
        """Is the set a member of the chosen ultrafilter?

        Exact sets always decide. Sampled sets decide only when they (or
        their complements) match a pin pointwise on the shared window;
        otherwise ``Undecidable`` is raised.
        """
        if subject.kind == SAMPLED:
            verdict = self._match_sampled(subject)
            if verdict is None:
                raise Undecidable(
                    f"{context}: {subject.describe()} is sampled and matches "
                    "no pin; membership beyond the horizon is unknown"
                )
            self._record(subject, verdict, context)
            return verdict
        if subject.kind == FINITE:
            verdict = Membership.OUT
        elif subject.kind == COFINITE:
            verdict = Membership.IN
        else:
            period = len(subject.cycle)
            inside = subject.class_inside(self._selected % period, period)
            verdict = Membership.IN if inside else Membership.OUT
        self._record(subject, verdict, context)
        return verdict

    def _match_sampled(self, subject: IndexSet) -> Membership | None:
        comp = subject.complement()
        for pin in self._sampled_pins + self._exact_pins:
            window = subject.horizon
            if pin.target.kind == SAMPLED:
                window = min(window, pin.target.horizon)
            if subject.window_agrees(pin.target, window):
                return pin.verdict
            if comp.window_agrees(pin.target, window):
                return pin.verdict.flipped()
        return None

    def select_from_partition(
        self, parts: Sequence[IndexSet], context: str = "partition"
    ) -> int:
        """Index of the unique part the ultrafilter accepts.

        Parts must be pairwise disjoint (checked exactly on their periodic
        representations) and must jointly cover all but finitely many
        indices.
        """
        if not parts:
            raise NotAPartition("no parts given")
        exact = [p for p in parts if p.exact]
        for i in range(len(exact)):
            for j in range(i + 1, len(exact)):
                meet = exact[i].intersection(exact[j])
                if not meet.is_empty():
                    raise NotAPartition(
                        f"parts overlap: {exact[i].describe()} and {exact[j].describe()}"
                    )
        if len(exact) == len(parts):
            union = IndexSet.empty()
            for p in parts:
                union = union.union(p)
            if union.kind != COFINITE:
                raise NotAPartition("union of parts misses infinitely many indices")
        verdicts = [self.decide(p, context=context) for p in parts]
        winners = [i for i, v in enumerate(verdicts) if v is Membership.IN]
        if len(winners) != 1:
            raise InvariantBreach(
                f"partition selection found {len(winners)} accepted parts; "
                "the inputs cannot form a partition"
            )
        return winners[0]

    # -- rendering -------------------------------------------------------------

    def describe(self) -> str:
        bits = [f"tower={self._selected} (mod {self._modulus})"]
        for pin in self._exact_pins + self._sampled_pins:
            bits.append(f"pin {pin.verdict.value} {pin.target.describe()}")
        return "; ".join(bits)

    def __repr__(self):
        return f"FilterOracle({self.describe()})"
