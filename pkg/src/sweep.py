# -*- coding: utf-8 -*-
"""
Sliding lever sweep
===================

The lever for position t starts at O(t) = (t - h(t), 0) and has the smallest
slope that still touches the plot somewhere in [t, t + mu/2]; that slope is
the reciprocal of the left dilation via P(t). Moving t leftwards over one full
period, the lever passes through states

- K(i, j): tangent to piece j in its interior
- Y(i, j): touching with its right endpoint t + mu/2, which lies on piece j
- V(i, j): touching the downward wedge tip E_j between pieces j-1 and j

where i is the piece over t. The sweep jumps from event to event, always
taking the candidate with the largest t not beyond the current position.

- initial_state(), next_event(), slide_lever(): the event-driven driver
- side_slope(), contact_of(), slope_at(): closed-form evaluation of a state
- RealizedSequence: the recorded states with their breakpoints
"""

from __future__ import annotations
import bisect, enum, logging, math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from numpy.polynomial import Polynomial

from .config import DEFAULT_CONFIG, SolverConfig
from .errors import EventBudgetExceeded, NoEventFound, PreconditionViolated, TerminalStateMismatch
from .geom_core import HyperbolaSeg, SegmentTable
from .plot import global_min, t_from_o, tangent_contact, tangent_slope
from .retarget import RetargetTable, jump_of
from .roots import first_drop, quadratic_roots, real_roots

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

TraceSink = Callable[[Dict[str, Any]], None]


class StateKind(enum.Enum):
    K = "K"
    Y = "Y"
    V = "V"


@dataclass(frozen=True)
class LeverState:
    kind: StateKind
    i: int
    j: int

    def shifted(self, periods: int, n: int) -> "LeverState":
        return LeverState(self.kind, self.i + periods * n, self.j + periods * n)

    def __str__(self) -> str:
        return f"{self.kind.value}({self.i},{self.j})"


class EventKind(enum.Enum):
    TRANSITION = "state-transition"
    RETARGET = "jump-destination-change"


@dataclass(frozen=True)
class Event:
    t: float
    kind: EventKind
    label: str
    priority: int
    new_state: Optional[LeverState] = None
    new_jm: Optional[int] = None
    jumping: bool = False


@dataclass(frozen=True)
class RealizedSequence:
    """
    States in sweep order. ``entries[k] = (t_k, S_k)`` with t nonincreasing;
    S_k covers [t_{k+1}, t_k] and the last one reaches down to t0 - mu.
    """

    entries: Tuple[Tuple[float, LeverState], ...]
    t0: float
    perimeter: float
    n: int
    event_count: int = 0
    _lows: List[float] = field(init=False, repr=False, compare=False)
    _spans: List[Tuple[float, float, LeverState]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        bottom = self.t0 - self.perimeter
        spans: List[Tuple[float, float, LeverState]] = []
        for k in range(len(self.entries) - 1, -1, -1):
            hi, state = self.entries[k]
            lo = self.entries[k + 1][0] if k + 1 < len(self.entries) else bottom
            if hi > lo or not spans and k == 0:
                spans.append((lo, hi, state))
        object.__setattr__(self, "_spans", spans)
        object.__setattr__(self, "_lows", [s[0] for s in spans])

    @property
    def breakpoints(self) -> List[float]:
        """Ascending breakpoints, from t0 - mu up to t0."""
        return [s[0] for s in self._spans] + [self.t0]

    def spans(self) -> List[Tuple[float, float, LeverState]]:
        """Ascending (lo, hi, state) intervals of positive length."""
        return list(self._spans)

    def reduce(self, t: float) -> float:
        """Representative of t in (t0 - mu, t0]."""
        mu = self.perimeter
        k = math.ceil((t - self.t0) / mu)
        r = t - k * mu
        if r > self.t0:
            r -= mu
        elif r <= self.t0 - mu:
            r += mu
        return r

    def state_at(self, t: float) -> LeverState:
        """State covering t (t already inside the sequence's period)."""
        k = bisect.bisect_right(self._lows, t) - 1
        k = min(max(k, 0), len(self._spans) - 1)
        return self._spans[k][2]

    def __len__(self) -> int:
        return len(self.entries)


# ----------------- closed forms of a state -----------------

def _origin(segs: SegmentTable, i: int, t: float) -> float:
    return t - segs.seg(i).value(t)


def side_slope(segs: SegmentTable, state: LeverState, t: float) -> float:
    """Lever slope of ``state`` at position t."""
    half = segs.perimeter / 2.0
    seg_i, seg_j = segs.seg(state.i), segs.seg(state.j)
    o = t - seg_i.value(t)
    if state.kind is StateKind.K:
        if not o < seg_j.m:
            raise PreconditionViolated(
                f"{state} at t={t!r}: lever origin o={o!r} is not left of the apex m={seg_j.m!r}"
            )
        return tangent_slope(seg_j, o)
    if state.kind is StateKind.V:
        return seg_j.value(seg_j.e_left) / (seg_j.e_left - o)
    return seg_j.value(t + half) / (seg_i.value(t) + half)


def contact_of(segs: SegmentTable, state: LeverState, t: float) -> float:
    """Abscissa where the lever of ``state`` touches the plot."""
    seg_j = segs.seg(state.j)
    if state.kind is StateKind.K:
        return tangent_contact(seg_j, _origin(segs, state.i, t))
    if state.kind is StateKind.V:
        return seg_j.e_left
    return t + segs.perimeter / 2.0


def slope_at(segs: SegmentTable, seq: RealizedSequence, t: float) -> float:
    tr = seq.reduce(t)
    return side_slope(segs, seq.state_at(tr), tr)


# ----------------- the sweep -----------------

def initial_state(
    segs: SegmentTable, retargets: RetargetTable, cfg: SolverConfig = DEFAULT_CONFIG
) -> Tuple[float, LeverState, int]:
    p_low, j0 = global_min(segs, cfg)
    t0 = p_low - segs.perimeter / 2.0
    jm = jump_of(retargets, p_low, cfg.eps_param(segs.perimeter))
    return t0, LeverState(StateKind.Y, segs.index_at(t0), j0), jm


class _Sweep:
    """Mutable driver state for one pass; see slide_lever()."""

    def __init__(self, segs: SegmentTable, retargets: RetargetTable, cfg: SolverConfig):
        self.segs = segs
        self.rts = retargets
        self.cfg = cfg
        self.mu = segs.perimeter
        self.half = self.mu / 2.0
        self.eps = cfg.eps_param(self.mu)
        self.tie = cfg.eps_tie(self.mu)
        self.touch = cfg.eps_contact(self.mu)
        self.t_c = 0.0
        self.state = LeverState(StateKind.Y, 0, 0)
        self.jm = 0
        self.cursor = 0
        self._entered: List[Tuple[float, LeverState]] = []

    # ----- helpers -----

    def _seg(self, j: int) -> HyperbolaSeg:
        return self.segs.seg(j)

    def _o(self, t: float) -> float:
        return _origin(self.segs, self.state.i, t)

    def _sigma_y(self, t: float) -> float:
        seg_i, seg_j = self._seg(self.state.i), self._seg(self.state.j)
        return seg_j.value(t + self.half) / (seg_i.value(t) + self.half)

    def _at(self, t: Optional[float], label: str, prio: int, state: Optional[LeverState] = None,
            jumping: bool = False, new_jm: Optional[int] = None) -> Optional[Event]:
        if t is None or not math.isfinite(t) or t > self.t_c + self.eps:
            return None
        kind = EventKind.TRANSITION if state is not None else EventKind.RETARGET
        return Event(min(t, self.t_c), kind, label, prio, state, new_jm, jumping)

    def _from_o(self, o: Optional[float], label: str, prio: int, state: LeverState,
                jumping: bool = False) -> Optional[Event]:
        if o is None:
            return None
        seg_i = self._seg(self.state.i)
        if not o < seg_i.m:
            return None
        return self._at(t_from_o(seg_i, o), label, prio, state, jumping)

    def _collides(self, j: int, o: float) -> bool:
        """Tangent from (o, 0) to hyperbola j touches piece j itself."""
        seg = self._seg(j)
        if not o < seg.m:
            return False
        u = tangent_contact(seg, o)
        return seg.e_left - self.eps <= u < seg.e_right

    def _tip(self, j: int) -> Tuple[float, float]:
        seg = self._seg(j)
        return seg.e_left, seg.value(seg.e_left)

    def _largest_o(self, roots: List[float], ok: Callable[[float], bool]) -> Optional[float]:
        o_c = self._o(self.t_c)
        good = [o for o in roots if o <= o_c + self.eps and ok(o)]
        return max(good) if good else None

    # ----- event families -----

    def _phase_shift(self) -> Optional[Event]:
        st = self.state
        new = LeverState(st.kind, st.i - 1, st.j)
        return self._at(self._seg(st.i).e_left, f"{st.kind.value}: phase {st.i}->{st.i - 1}", 1, new)

    def _retarget(self) -> Optional[Event]:
        st = self.state
        z = self.rts.position(self.cursor)
        new_jm = self.rts.dest_before(self.cursor)
        if st.kind is StateKind.Y:
            r_c = self.t_c + self.half
            t = self.t_c if z >= r_c - self.eps else z - self.half
            return self._at(t, "jump destination change", 0, new_jm=new_jm)
        if st.kind is StateKind.K:
            seg_j = self._seg(st.j)
            if not z > seg_j.m:
                return None
            c_c = tangent_contact(seg_j, self._o(self.t_c))
            if z >= c_c - self.eps:
                return self._at(self.t_c, "jump destination change", 0, new_jm=new_jm)
            o = seg_j.m - seg_j.d ** 2 / (z - seg_j.m)
            seg_i = self._seg(st.i)
            if not o < seg_i.m:
                return None
            return self._at(t_from_o(seg_i, o), "jump destination change", 0, new_jm=new_jm)
        tip, _ = self._tip(st.j)
        if z >= tip - self.eps:
            return self._at(self.t_c, "jump destination change", 0, new_jm=new_jm)
        return None

    def _polish(self, t: float, seg_i: HyperbolaSeg, seg_j: HyperbolaSeg) -> float:
        """Newton steps on c_j(o_i(t)) - (t + mu/2); keeps the root if they do not help."""
        mj, dj = seg_j.m, seg_j.d

        def residual(x: float) -> Optional[Tuple[float, float]]:
            hi = seg_i.value(x)
            o = x - hi
            if not o < mj:
                return None
            f = tangent_contact(seg_j, o) - (x + self.half)
            return f, dj * dj * (1.0 - (x - seg_i.m) / hi) / (mj - o) ** 2 - 1.0

        best, cur = t, residual(t)
        if cur is None:
            return t
        best_f = abs(cur[0])
        x = t
        for _ in range(4):
            f, df = cur
            if df == 0.0 or abs(f) <= self.tie:
                break
            x -= f / df
            cur = residual(x)
            if cur is None:
                break
            if abs(cur[0]) < best_f:
                best, best_f = x, abs(cur[0])
        return best

    def _cubic(self, want_k: bool) -> Optional[Event]:
        """Y <-> K on the same (i, j): c_j(o_i(t)) = t + mu/2, squared into a cubic."""
        st = self.state
        seg_i, seg_j = self._seg(st.i), self._seg(st.j)
        mi, di, mj, dj = seg_i.m, seg_i.d, seg_j.m, seg_j.d
        a = Polynomial([self.half - mj, 1.0])
        lhs = a * a * Polynomial([mi * mi + di * di, -2.0 * mi, 1.0])
        rhs = dj * dj - a * Polynomial([mj, -1.0])
        best: Optional[float] = None
        for root in real_roots(lhs - rhs * rhs):
            t = self._polish(root, seg_i, seg_j)
            if t > self.t_c + self.eps or t < seg_i.e_left - self.eps:
                continue
            r = t + self.half
            if not (r - mj > 0 and seg_j.e_left - self.eps <= r <= seg_j.e_right + self.eps):
                continue
            hi = seg_i.value(t)
            o = t - hi
            if not o < mj or abs(tangent_contact(seg_j, o) - r) > self.touch:
                continue
            dfdt = dj * dj * (1.0 - (t - mi) / hi) / (mj - o) ** 2 - 1.0
            if (dfdt > 0.0) != want_k or dfdt == 0.0:
                continue
            if best is None or t > best:
                best = t
        new_kind = StateKind.K if want_k else StateKind.Y
        label = "Y->K" if want_k else "K->Y"
        ev = self._at(best, label, 3, LeverState(new_kind, st.i, st.j))
        if ev is not None:
            return ev
        return self._mismatch(want_k)

    def _mismatch(self, want_k: bool) -> Optional[Event]:
        st = self.state
        seg_j = self._seg(st.j)
        o_c = self._o(self.t_c)
        if not o_c < seg_j.m:
            return None
        c_c = tangent_contact(seg_j, o_c)
        r_c = self.t_c + self.half
        if want_k and seg_j.e_left <= c_c < r_c - self.touch:
            logger.warning("Y(%d,%d) already tangent at t=%r; switching to K", st.i, st.j, self.t_c)
            return self._at(self.t_c, "Y->K (resync)", 3, LeverState(StateKind.K, st.i, st.j))
        if not want_k and c_c > r_c + self.touch:
            logger.warning("K(%d,%d) contact beyond endpoint at t=%r; switching to Y", st.i, st.j, self.t_c)
            return self._at(self.t_c, "K->Y (resync)", 3, LeverState(StateKind.Y, st.i, st.j))
        return None

    def _y_events(self) -> List[Optional[Event]]:
        st = self.state
        seg_i, seg_j = self._seg(st.i), self._seg(st.j)
        out = [
            self._at(seg_j.e_left - self.half, "Y->Y", 2, LeverState(StateKind.Y, st.i, st.j - 1)),
            self._cubic(want_k=True),
        ]
        if self.jm != st.j:
            jm = self.jm
            seg_m = self._seg(jm)
            tip_x, tip_y = self._tip(jm)
            lo = max(seg_i.e_left, seg_j.e_left - self.half)

            def to_tangent(t: float) -> Optional[float]:
                o = self._o(t)
                if not self._collides(jm, o):
                    return None
                return tangent_slope(seg_m, o) - self._sigma_y(t)

            def to_tip(t: float) -> Optional[float]:
                o = self._o(t)
                if not o < tip_x:
                    return None
                return tip_y / (tip_x - o) - self._sigma_y(t)

            n_s, tol = self.cfg.scan_samples, self.cfg.slope_abs
            out.append(self._at(first_drop(to_tangent, self.t_c, lo, n_s, tol), "Y->K(jm)", 4,
                                LeverState(StateKind.K, st.i, jm), jumping=True))
            out.append(self._at(first_drop(to_tip, self.t_c, lo, n_s, tol), "Y->V(jm)", 5,
                                LeverState(StateKind.V, st.i, jm), jumping=True))
        return out

    def _k_events(self) -> List[Optional[Event]]:
        st = self.state
        seg_j = self._seg(st.j)
        mj, dj, ej = seg_j.m, seg_j.d, seg_j.e_left
        out = [self._cubic(want_k=False)]
        if ej > mj:
            o = mj - dj * dj / (ej - mj)
            if self._seg(st.j - 1).m > mj + self.tie:
                out.append(self._from_o(o, "K->V", 2, LeverState(StateKind.V, st.i, st.j)))
            else:
                out.append(self._from_o(o, "K->K(j-1)", 2, LeverState(StateKind.K, st.i, st.j - 1)))
        if self.jm != st.j:
            jm = self.jm
            seg_m = self._seg(jm)
            if seg_m.d < dj:
                o = (dj * seg_m.m - seg_m.d * mj) / (dj - seg_m.d)
                if o < mj and self._collides(jm, o):
                    out.append(self._from_o(o, "K->K(jm)", 4, LeverState(StateKind.K, st.i, jm), True))
            e_x, e_y = self._tip(jm)
            if e_y < dj:
                roots = quadratic_roots(
                    e_y * e_y - dj * dj,
                    2.0 * e_x * dj * dj - 2.0 * e_y * e_y * mj,
                    e_y * e_y * (mj * mj + dj * dj) - dj * dj * e_x * e_x,
                )

                def ok(o: float) -> bool:
                    return (o < e_x and o < mj and tangent_contact(seg_j, o) > e_x
                            and abs(tangent_slope(seg_j, o) - e_y / (e_x - o)) <= 1e-9)

                o = self._largest_o(roots, ok)
                out.append(self._from_o(o, "K->V(jm)", 5, LeverState(StateKind.V, st.i, jm), True))
        return out

    def _v_events(self) -> List[Optional[Event]]:
        st = self.state
        tip_x, tip_y = self._tip(st.j)
        prev = self._seg(st.j - 1)
        out = [self._at(tip_x - self.half, "V->Y", 2, LeverState(StateKind.Y, st.i, st.j - 1))]
        if tip_x > prev.m:
            o = prev.m - prev.d ** 2 / (tip_x - prev.m)
            out.append(self._from_o(o, "V->K(j-1)", 3, LeverState(StateKind.K, st.i, st.j - 1)))
        if self.jm != st.j:
            jm = self.jm
            seg_m = self._seg(jm)
            mm, dm = seg_m.m, seg_m.d
            if tip_y > dm:
                roots = quadratic_roots(
                    dm * dm - tip_y * tip_y,
                    2.0 * tip_y * tip_y * mm - 2.0 * dm * dm * tip_x,
                    dm * dm * tip_x * tip_x - tip_y * tip_y * (mm * mm + dm * dm),
                )

                def ok(o: float) -> bool:
                    if not (o < mm and o < tip_x and self._collides(jm, o)):
                        return False
                    return (tangent_contact(seg_m, o) < tip_x
                            and abs(tangent_slope(seg_m, o) - tip_y / (tip_x - o)) <= 1e-9)

                o = self._largest_o(roots, ok)
                out.append(self._from_o(o, "V->K(jm)", 4, LeverState(StateKind.K, st.i, jm), True))
            m_x, m_y = self._tip(jm)
            if m_y < tip_y:
                o = (m_y * tip_x - tip_y * m_x) / (m_y - tip_y)
                if o < m_x:
                    out.append(self._from_o(o, "V->V(jm)", 5, LeverState(StateKind.V, st.i, jm), True))
        return out

    # ----- driver -----

    def candidates(self) -> List[Event]:
        kind = self.state.kind
        family = self._y_events() if kind is StateKind.Y else (
            self._k_events() if kind is StateKind.K else self._v_events())
        found = [self._phase_shift(), self._retarget()] + family
        return [ev for ev in found if ev is not None and not self._reenters(ev)]

    def _reenters(self, ev: Event) -> bool:
        """A transition back into a state already entered at (numerically) the same t."""
        if ev.new_state is None:
            return False
        for t, state in self._entered:
            if state == ev.new_state and abs(t - ev.t) <= self.eps:
                logger.debug("t=%r: dropping %s, %s was entered at t=%r", ev.t, ev.label, state, t)
                return True
        return False

    def pick(self) -> Event:
        cands = self.candidates()
        if not cands:
            raise NoEventFound(
                f"No event from {self.state} at t={self.t_c!r} (jm={self.jm}, cursor={self.cursor})"
            )
        t_max = max(ev.t for ev in cands)
        return min((ev for ev in cands if ev.t >= t_max - self.tie), key=lambda ev: ev.priority)

    def apply(self, ev: Event) -> None:
        self.t_c = ev.t
        if ev.kind is EventKind.RETARGET:
            self.jm = ev.new_jm  # type: ignore[assignment]
            self.cursor -= 1
            return
        old = self.state
        self.state = ev.new_state  # type: ignore[assignment]
        self._entered = [(t, s) for t, s in self._entered if t - ev.t <= self.eps]
        self._entered += [(ev.t, old), (ev.t, self.state)]
        if ev.jumping:
            self.jm = self.state.j
            self.cursor = self.rts.rightmost_at_or_before(self._contact(), self.eps)
        elif "resync" in ev.label:
            self.cursor = self.rts.rightmost_at_or_before(self._contact(), self.eps)
            self.jm = self.rts.dest(self.cursor)
        logger.debug("t=%r %s: %s -> %s (jm=%d)", ev.t, ev.label, old, self.state, self.jm)

    def _contact(self) -> float:
        return contact_of(self.segs, self.state, self.t_c)


def next_event(
    segs: SegmentTable,
    retargets: RetargetTable,
    state: LeverState,
    t_c: float,
    jm: int,
    cursor: Optional[int] = None,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> Event:
    """
    The next event from ``state`` at ``t_c``. ``cursor`` is the extended index
    of the next retargeting point not yet passed by the contact; by default the
    rightmost one at or left of the current contact.
    """
    sw = _Sweep(segs, retargets, cfg)
    sw.t_c, sw.state, sw.jm = t_c, state, jm
    sw.cursor = cursor if cursor is not None else retargets.rightmost_at_or_before(sw._contact(), sw.eps)
    return sw.pick()


def slide_lever(
    segs: SegmentTable,
    retargets: RetargetTable,
    cfg: SolverConfig = DEFAULT_CONFIG,
    trace: Optional[TraceSink] = None,
) -> RealizedSequence:
    """Sweep one full period leftwards from t0 = p_low - mu/2."""
    t0, state, jm = initial_state(segs, retargets, cfg)
    sw = _Sweep(segs, retargets, cfg)
    sw.t_c, sw.state, sw.jm = t0, state, jm
    sw.cursor = retargets.rightmost_at_or_before(t0 + sw.half, sw.eps)
    t_end = t0 - segs.perimeter
    budget = cfg.event_budget(segs.n)
    entries: List[Tuple[float, LeverState]] = [(t0, state)]
    count = 0

    while sw.t_c > t_end + sw.eps:
        ev = sw.pick()
        if ev.t <= t_end + sw.eps:
            break
        count += 1
        if count > budget:
            raise EventBudgetExceeded(
                f"More than {budget} events (n={segs.n}); last state {sw.state} at t={sw.t_c!r}"
            )
        before = sw.state
        sw.apply(ev)
        if ev.kind is EventKind.TRANSITION:
            entries.append((ev.t, sw.state))
        if trace is not None:
            trace({
                "t": ev.t,
                "kind": ev.kind.value,
                "event": ev.label,
                "before": str(before),
                "after": str(sw.state),
                "jm": sw.jm,
            })

    expect_i, expect_j = state.i - segs.n, state.j - segs.n
    final = sw.state
    # a V state whose tip sits at the lever endpoint is the same lever as Y
    tip_at_end = final.kind is StateKind.V and abs(segs.seg(final.j).e_left - (t_end + sw.half)) <= sw.touch
    if (final.i, final.j) != (expect_i, expect_j) or not (final.kind is StateKind.Y or tip_at_end):
        raise TerminalStateMismatch(
            f"Sweep ended in {final} at t={sw.t_c!r}, expected Y({expect_i},{expect_j})"
        )
    logger.info("sweep: %d events, %d states over one period", count, len(entries))
    return RealizedSequence(tuple(entries), t0, segs.perimeter, segs.n, count)
