"""Cost budgets for the exponential-in-the-worst-case operations.

The rank-type computation and the game oracle are intrinsically expensive
(MSO enumerates all subsets of the universe).  Budgets are explicit
configuration; exceeding one raises BudgetExceeded rather than silently
truncating anything.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import BudgetExceeded


@dataclass(frozen=True)
class Budgets:
    # Maximum number of recursive extension steps allowed when computing a
    # rank-m type: |A|^m for FO, (|A| + 2^|A|)^m for MSO.
    fo_type_cost: int = 5_000_000
    mso_type_cost: int = 600_000
    # Game oracle limits (per structure).
    game_size_fo: int = 8
    game_rounds_fo: int = 3
    game_size_mso: int = 6
    game_rounds_mso: int = 2
    # Maximum 2^|A| for a single MSO set quantifier in direct evaluation.
    eval_set_moves: int = 70_000
    # Brute-force embedding search: maximum host universe.
    embed_size: int = 12

    def with_overrides(self, **kw):
        return replace(self, **kw)

    def check_type_cost(self, size, m, logic):
        if logic == "mso":
            per_level = size + (1 << size if size < 60 else self.mso_type_cost + 1)
            cost = per_level**m if m else 1
            if cost > self.mso_type_cost:
                raise BudgetExceeded(
                    f"MSO rank-{m} type on {size} elements",
                    cost=cost,
                    limit=self.mso_type_cost,
                )
        else:
            cost = size**m if m else 1
            if cost > self.fo_type_cost:
                raise BudgetExceeded(
                    f"FO rank-{m} type on {size} elements",
                    cost=cost,
                    limit=self.fo_type_cost,
                )
        return cost

    def check_game(self, size_a, size_b, m, logic):
        if logic == "mso":
            size_cap, round_cap = self.game_size_mso, self.game_rounds_mso
        else:
            size_cap, round_cap = self.game_size_fo, self.game_rounds_fo
        big = max(size_a, size_b)
        if big > size_cap:
            raise BudgetExceeded(
                f"{logic} game on {big} elements", cost=big, limit=size_cap
            )
        if m > round_cap:
            raise BudgetExceeded(f"{logic} game with {m} rounds", cost=m, limit=round_cap)

    def check_set_moves(self, size):
        cost = 1 << size if size < 60 else self.eval_set_moves + 1
        if cost > self.eval_set_moves:
            raise BudgetExceeded(
                f"set quantifier over {size} elements", cost=cost, limit=self.eval_set_moves
            )

    def check_embed(self, host_size):
        if host_size > self.embed_size:
            raise BudgetExceeded(
                f"embedding search in {host_size} elements",
                cost=host_size,
                limit=self.embed_size,
            )


DEFAULT_BUDGETS = Budgets()
