"""Declared sample grids: all CNF ordinals below a bound with exponent and
coefficient caps, enumerated in ascending order."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List

from .errors import ValidationError
from .ordinal import Ordinal, omega_power, ord_add, ord_cmp, parse_ordinal


@dataclass(frozen=True)
class GridSpec:
    bound: Ordinal
    max_exp: int
    max_coeff: int

    @staticmethod
    def parse(text: str) -> "GridSpec":
        """Grid spec syntax: BOUND:MAX_EXP:MAX_COEFF, e.g. 'w^3:2:4'."""
        bits = text.split(":")
        if len(bits) != 3:
            raise ValidationError(f"grid spec must be BOUND:MAX_EXP:MAX_COEFF, got {text!r}")
        try:
            return GridSpec(parse_ordinal(bits[0]), int(bits[1]), int(bits[2]))
        except ValueError as exc:
            raise ValidationError(f"bad grid spec {text!r}: {exc}") from exc

    def spec_string(self) -> str:
        return f"{self.bound}:{self.max_exp}:{self.max_coeff}"

    def ordinals(self) -> List[Ordinal]:
        """All nonzero ordinals sum(w^e*c_e, e <= max_exp, c_e <= max_coeff)
        below the bound, ascending."""
        if self.max_exp < 0 or self.max_coeff < 1:
            raise ValidationError("grid caps must be positive")
        out: List[Ordinal] = []
        exps = list(range(self.max_exp, -1, -1))
        for coeffs in itertools.product(range(self.max_coeff + 1), repeat=len(exps)):
            if not any(coeffs):
                continue
            val = Ordinal(0)
            for e, c in zip(exps, coeffs):
                if c:
                    val = ord_add(val, omega_power(Ordinal(e), c))
            if ord_cmp(val, self.bound) < 0:
                out.append(val)
        return out
