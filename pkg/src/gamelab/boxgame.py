"""The box game: Alice touches boxes, Bob destroys them.

A position is a family of disjoint boxes ``A_1 .. A_s``.  Alice moves first
and claims exactly one element per turn; claiming from a box marks it as
*touched*.  Bob claims up to ``b`` elements per turn (at least one whenever
any element remains).  Bob wins as soon as some box is emptied before Alice
has touched it; Alice wins once every box is touched.

For near-uniform families (sizes differing by at most one) the outcome has a
closed form: Bob wins exactly when the total number of elements is at most a
threshold ``box_threshold(s, b)`` defined by the recurrence

    f(1, b) = 0,        f(s, b) = floor(s / (s - 1) * (f(s - 1, b) + b)).

The module exposes the threshold, the closed-form criterion, an exact minimax
solver used to validate it, and the explicit strategies on both sides.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from ._util import BudgetExceeded

ALICE = "alice"
BOB = "bob"
ALICE_WON = "alice_won"
BOB_WON = "bob_won"


class BoxGameError(ValueError):
    """Raised for malformed box-game positions or illegal moves."""


def harmonic_number(n: int) -> Fraction:
    """H_n = 1 + 1/2 + ... + 1/n as an exact fraction (H_0 = 0)."""
    if n < 0:
        raise ValueError("harmonic_number needs n >= 0")
    total = Fraction(0)
    for i in range(1, n + 1):
        total += Fraction(1, i)
    return total


def box_threshold(s: int, b: int) -> int:
    """Largest total size of a near-uniform family of s boxes that Bob wins."""
    if s < 1 or b < 1:
        raise ValueError("box_threshold needs s >= 1 and b >= 1")
    val = 0
    for i in range(2, s + 1):
        val = (i * (val + b)) // (i - 1)
    return val


def threshold_lower_bound(s: int, b: int) -> Fraction:
    """Closed-form lower bound (b - 1) * s * H_{s-1} for the threshold."""
    if s < 1 or b < 1:
        raise ValueError("threshold_lower_bound needs s >= 1 and b >= 1")
    return (b - 1) * s * harmonic_number(s - 1)


def is_near_uniform(sizes: Sequence[int]) -> bool:
    return not sizes or max(sizes) - min(sizes) <= 1


def bob_wins(sizes: Sequence[int], b: int) -> bool:
    """Closed-form outcome for a near-uniform family: does Bob win?"""
    if not sizes:
        raise BoxGameError("need at least one box")
    if any(a < 1 for a in sizes):
        raise BoxGameError("box sizes must be positive")
    if b < 1:
        raise BoxGameError("bias must be at least 1")
    if not is_near_uniform(sizes):
        raise BoxGameError("criterion applies to near-uniform families only")
    return sum(sizes) <= box_threshold(len(sizes), b)


@dataclass
class BoxGameState:
    """Mutable box-game position.

    Bob's turn is split into single claims; ``claims_left`` counts how many he
    may still make this turn.  ``end_bob_turn`` is legal once he has claimed at
    least once, or when no elements remain anywhere.
    """

    remaining: list[int]
    touched: list[bool]
    b: int
    turn: str = ALICE
    claims_left: int = 0
    history: list[tuple[str, int | None]] = field(default_factory=list)

    @classmethod
    def new(cls, sizes: Sequence[int], b: int, first: str = ALICE) -> "BoxGameState":
        if not sizes:
            raise BoxGameError("need at least one box")
        if any(a < 0 for a in sizes):
            raise BoxGameError("box sizes must be nonnegative")
        if b < 1:
            raise BoxGameError("bias must be at least 1")
        if first not in (ALICE, BOB):
            raise BoxGameError(f"unknown first player {first!r}")
        return cls(
            remaining=list(sizes),
            touched=[False] * len(sizes),
            b=b,
            turn=first,
            claims_left=b if first == BOB else 0,
        )

    @property
    def s(self) -> int:
        return len(self.remaining)

    def winner(self) -> str | None:
        if any(r == 0 and not t for r, t in zip(self.remaining, self.touched)):
            return BOB_WON
        if all(self.touched):
            return ALICE_WON
        return None

    def elements_remain(self) -> bool:
        return any(r > 0 for r in self.remaining)

    def _claimable(self, i: int) -> None:
        if not 0 <= i < self.s:
            raise BoxGameError(f"box index {i} out of range")
        if self.remaining[i] == 0:
            raise BoxGameError(f"box {i} is empty")

    def alice_claim(self, i: int) -> None:
        if self.winner() is not None:
            raise BoxGameError("game is over")
        if self.turn != ALICE:
            raise BoxGameError("not Alice's turn")
        self._claimable(i)
        self.remaining[i] -= 1
        self.touched[i] = True
        self.history.append((ALICE, i))
        self.turn = BOB
        self.claims_left = self.b

    def bob_claim(self, i: int) -> None:
        if self.winner() is not None:
            raise BoxGameError("game is over")
        if self.turn != BOB:
            raise BoxGameError("not Bob's turn")
        if self.claims_left == 0:
            raise BoxGameError("bias exhausted this turn")
        self._claimable(i)
        self.remaining[i] -= 1
        self.claims_left -= 1
        self.history.append((BOB, i))
        if self.claims_left == 0 and self.winner() is None:
            self.turn = ALICE

    def end_bob_turn(self) -> None:
        if self.winner() is not None:
            raise BoxGameError("game is over")
        if self.turn != BOB:
            raise BoxGameError("not Bob's turn")
        if self.claims_left == self.b and self.elements_remain():
            raise BoxGameError("Bob must claim at least one element")
        self.history.append((BOB, None))
        self.turn = ALICE
        self.claims_left = 0

    def clone(self) -> "BoxGameState":
        return BoxGameState(
            remaining=list(self.remaining),
            touched=list(self.touched),
            b=self.b,
            turn=self.turn,
            claims_left=self.claims_left,
            history=list(self.history),
        )


def _canonical(remaining: Sequence[int], touched: Sequence[bool]) -> tuple:
    return tuple(
        sorted((r, t) for r, t in zip(remaining, touched) if not (r == 0 and t))
    )


def solve_boxgame(
    sizes: Sequence[int],
    b: int,
    first: str = ALICE,
    budget: int | None = None,
) -> bool:
    """Exact minimax value: True iff Bob destroys a box under optimal play."""
    state = BoxGameState.new(sizes, b, first=first)
    memo: dict[tuple, bool] = {}
    nodes = 0

    def visit(rem: list[int], tou: list[bool], turn: str, claims_left: int) -> bool:
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceeded(nodes, what="box-game solver")
        if any(r == 0 and not t for r, t in zip(rem, tou)):
            return True
        if all(tou):
            return False
        key = (_canonical(rem, tou), turn, claims_left)
        if key in memo:
            return memo[key]
        if turn == ALICE:
            result = True
            seen: set[tuple[int, bool]] = set()
            for i in range(len(rem)):
                if rem[i] == 0 or (rem[i], tou[i]) in seen:
                    continue
                seen.add((rem[i], tou[i]))
                rem[i] -= 1
                was = tou[i]
                tou[i] = True
                if not visit(rem, tou, BOB, b):
                    result = False
                rem[i] += 1
                tou[i] = was
                if not result:
                    break
        else:
            result = False
            seen = set()
            for i in range(len(rem)):
                if rem[i] == 0 or (rem[i], tou[i]) in seen:
                    continue
                seen.add((rem[i], tou[i]))
                rem[i] -= 1
                if claims_left - 1 == 0:
                    child = visit(rem, tou, ALICE, 0)
                else:
                    child = visit(rem, tou, BOB, claims_left - 1)
                rem[i] += 1
                if child:
                    result = True
                    break
            if not result and (claims_left < b or not any(r > 0 for r in rem)):
                result = visit(rem, tou, ALICE, 0)
        memo[key] = result
        return result

    return visit(
        list(state.remaining), list(state.touched), state.turn, state.claims_left
    )


def alice_strategy(state: BoxGameState) -> int:
    """Touch the most endangered box: untouched with fewest elements left."""
    best = None
    for i in range(state.s):
        if state.touched[i] or state.remaining[i] == 0:
            continue
        if best is None or state.remaining[i] < state.remaining[best]:
            best = i
    if best is None:
        # nothing untouched is claimable; take any remaining element
        for i in range(state.s):
            if state.remaining[i] > 0:
                return i
        raise BoxGameError("no claimable box")
    return best


def bob_strategy(state: BoxGameState) -> int | None:
    """Finish an untouched box if the bias allows it, else keep them level.

    If the smallest untouched box fits inside the claims still available this
    turn, empty it (immediate win).  Otherwise claim from the largest
    untouched box, which keeps the untouched family near-uniform; ends the
    turn when no untouched box remains.
    """
    smallest = None
    largest = None
    for i in range(state.s):
        if state.touched[i] or state.remaining[i] == 0:
            continue
        if smallest is None or state.remaining[i] < state.remaining[smallest]:
            smallest = i
        if largest is None or state.remaining[i] > state.remaining[largest]:
            largest = i
    if smallest is None:
        return None
    if state.remaining[smallest] <= state.claims_left:
        return smallest
    return largest


def play_boxgame(
    sizes: Sequence[int],
    b: int,
    alice: Callable[[BoxGameState], int] = alice_strategy,
    bob: Callable[[BoxGameState], int | None] = bob_strategy,
    first: str = ALICE,
    max_plies: int = 10_000,
) -> BoxGameState:
    """Run both scripted strategies to completion and return the final state."""
    state = BoxGameState.new(sizes, b, first=first)
    for _ in range(max_plies):
        if state.winner() is not None:
            return state
        if state.turn == ALICE:
            state.alice_claim(alice(state))
        else:
            choice = bob(state)
            if choice is None:
                if state.claims_left == state.b and state.elements_remain():
                    raise BoxGameError("Bob's strategy tried an illegal sit-out")
                state.end_bob_turn()
            else:
                state.bob_claim(choice)
    raise BoxGameError("game did not terminate")


def verify_bob_strategy(
    sizes: Sequence[int],
    b: int,
    first: str = ALICE,
    budget: int | None = None,
) -> tuple[bool, int]:
    """Check that the scripted Bob beats *every* Alice line.

    Returns (sound, nodes).  Alice's choices are enumerated up to box
    equivalence (same remaining count and touch flag); Bob follows
    ``bob_strategy``.
    """
    nodes = 0

    def run_bob_turn(state: BoxGameState) -> None:
        while state.winner() is None and state.turn == BOB:
            choice = bob_strategy(state)
            if choice is None:
                state.end_bob_turn()
            else:
                state.bob_claim(choice)

    def visit(state: BoxGameState) -> bool:
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceeded(nodes, what="box-strategy verifier")
        w = state.winner()
        if w is not None:
            return w == BOB_WON
        if state.turn == BOB:
            nxt = state.clone()
            run_bob_turn(nxt)
            return visit(nxt)
        seen: set[tuple[int, bool]] = set()
        for i in range(state.s):
            if state.remaining[i] == 0:
                continue
            sig = (state.remaining[i], state.touched[i])
            if sig in seen:
                continue
            seen.add(sig)
            nxt = state.clone()
            nxt.alice_claim(i)
            if not visit(nxt):
                return False
        return True

    root = BoxGameState.new(sizes, b, first=first)
    return visit(root), nodes
