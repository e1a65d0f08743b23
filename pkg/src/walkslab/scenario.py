"""Scenario files: a single JSON document declaring the session bound, the
club provider, ladder families, named sets, partitions, list blocks and the
suites to run.  Ordinals appear everywhere as expression strings.

Validation is eager: every referenced name must resolve and every ordinal
must parse and stay below the declared bound before any suite runs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple

from .cseq import CSeqProvider, TableSpec, canonical_provider, table_provider
from .errors import ValidationError
from .fpsets import FpSet, Part
from .grid import GridSpec
from .lists import CandidatePool, IndexedFamily, ListContext, PairingTable
from .ordinal import ONE, Ordinal, ord_cmp, parse_ordinal
from .rhophi import PhiFamily
from .twowalks import Partition, SetCSeq

SUITE_NAMES = (
    "walk-shape",
    "walk-lemmas",
    "rho-phi-monotone",
    "two-walk-propositions",
    "two-walk-coherence",
    "xyz-witness",
    "list-thinness",
    "branch",
    "indep-family",
    "fip",
    "parser-roundtrip",
)


def _ord(raw, where: str, bound: Optional[Ordinal] = None) -> Ordinal:
    if isinstance(raw, int):
        value = Ordinal(raw)
    elif isinstance(raw, str):
        try:
            value = parse_ordinal(raw)
        except Exception as exc:
            raise ValidationError(f"{where}: bad ordinal {raw!r}: {exc}") from exc
    else:
        raise ValidationError(f"{where}: expected an ordinal expression, got {raw!r}")
    if bound is not None and ord_cmp(value, bound) >= 0:
        raise ValidationError(f"{where}: {value} is not below the bound {bound}")
    return value


def _parts(raw, where: str, bound: Optional[Ordinal]) -> List[Part]:
    if not isinstance(raw, list):
        raise ValidationError(f"{where}: parts must be a list")
    out: List[Part] = []
    for item in raw:
        if isinstance(item, (str, int)):
            out.append(Part(_ord(item, where, bound), ONE, 1))
        elif isinstance(item, list) and len(item) in (2, 3):
            base = _ord(item[0], where, bound)
            step = _ord(item[1], where)
            count = None
            if len(item) == 3:
                count = item[2]
                if count is not None and not isinstance(count, int):
                    raise ValidationError(f"{where}: part count must be an int")
            out.append(Part(base, step, count))
        else:
            raise ValidationError(f"{where}: bad part {item!r}")
    return out


@dataclass
class ListsBlock:
    name: str
    context: ListContext
    bound: int
    indexed_family: Optional[IndexedFamily] = None
    pool: Optional[CandidatePool] = None


@dataclass
class Scenario:
    name: str
    bound: Ordinal
    seed: int
    provider: CSeqProvider
    grid: Optional[GridSpec]
    phi: Optional[PhiFamily]
    fpsets: Dict[str, FpSet]
    set_cseq: SetCSeq
    partitions: Dict[str, Partition]
    families: Dict[str, List[str]]
    avoid_set: FrozenSet[Ordinal]
    targets: Tuple[Ordinal, ...]
    lists: Dict[str, ListsBlock]
    suites: List[dict] = field(default_factory=list)

    def family_roster(self, name: str) -> List[Tuple[str, FpSet]]:
        if name not in self.families:
            raise ValidationError(f"unknown family {name!r}")
        return [(n, self.fpsets[n]) for n in self.families[name]]

    def grid_ordinals(self) -> List[Ordinal]:
        if self.grid is None:
            raise ValidationError("scenario declares no sample grid")
        return self.grid.ordinals()


def bundled_scenario_path(name: str) -> str:
    """Filesystem path of a reference scenario shipped with the package."""
    from importlib.resources import files

    path = files("walkslab").joinpath("scenarios", f"{name}.json")
    if not path.is_file():
        raise ValidationError(f"no bundled scenario named {name!r}")
    return str(path)


def load_scenario(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON: {exc}") from exc
    return build_scenario(doc, name=path)


def build_scenario(doc: Mapping, name: str = "<inline>") -> Scenario:
    if "bound" not in doc:
        raise ValidationError(f"{name}: missing 'bound'")
    bound = _ord(doc["bound"], f"{name}.bound")
    seed = doc.get("seed", 0)
    if not isinstance(seed, int):
        raise ValidationError(f"{name}: seed must be an integer")

    provider = _build_provider(doc.get("provider", {"kind": "canonical"}), bound, name)
    grid = None
    if "grid" in doc:
        g = doc["grid"]
        grid = GridSpec(_ord(g.get("bound", doc["bound"]), f"{name}.grid.bound"),
                        int(g.get("max_exp", 2)), int(g.get("max_coeff", 4)))
        if ord_cmp(grid.bound, bound) > 0:
            raise ValidationError(f"{name}: grid bound exceeds the session bound")

    phi = _build_phi(doc.get("phi"), bound, name)
    fpsets = {}
    for nm, raw in (doc.get("fpsets") or {}).items():
        try:
            fpsets[nm] = FpSet(_parts(raw, f"{name}.fpsets.{nm}", bound))
        except ValidationError:
            raise
    set_cseq = _build_set_cseq(doc.get("set_cseq"), fpsets, bound, name)
    partitions = {}
    for nm, cells in (doc.get("partitions") or {}).items():
        built = []
        for idx, raw in cells.items():
            built.append((_ord(idx, f"{name}.partitions.{nm}"),
                          FpSet(_parts(raw, f"{name}.partitions.{nm}[{idx}]", bound))))
        partitions[nm] = Partition(tuple(built))
    families = {}
    for nm, roster in (doc.get("families") or {}).items():
        for member in roster:
            if member not in fpsets:
                raise ValidationError(f"{name}: family {nm!r} references unknown set {member!r}")
        families[nm] = list(roster)
    avoid_set = frozenset(_ord(v, f"{name}.avoid_set", bound)
                          for v in doc.get("avoid_set", []))
    targets = tuple(_ord(v, f"{name}.targets", bound) for v in doc.get("targets", []))
    lists = {nm: _build_lists_block(nm, block, provider, fpsets, bound, name)
             for nm, block in (doc.get("lists") or {}).items()}

    suites = []
    for entry in doc.get("suites", []):
        if isinstance(entry, str):
            entry = {"suite": entry}
        if entry.get("suite") not in SUITE_NAMES:
            raise ValidationError(f"{name}: unknown suite name {entry.get('suite')!r}")
        suites.append(dict(entry))

    return Scenario(name=name, bound=bound, seed=seed, provider=provider,
                    grid=grid, phi=phi, fpsets=fpsets, set_cseq=set_cseq,
                    partitions=partitions, families=families,
                    avoid_set=avoid_set, targets=targets, lists=lists,
                    suites=suites)


def _build_provider(raw: Mapping, bound: Ordinal, name: str) -> CSeqProvider:
    kind = raw.get("kind", "canonical")
    if kind == "canonical":
        return canonical_provider(bound)
    if kind != "table":
        raise ValidationError(f"{name}: unknown provider kind {kind!r}")
    specs = []
    for entry in raw.get("entries", []):
        where = f"{name}.provider.entries"
        beta = _ord(entry["beta"], where, bound)
        prefix = tuple(_ord(v, where, bound) for v in entry.get("prefix", []))
        tails = []
        if "tails" in entry:
            for t in entry["tails"]:
                tails.append((_ord(t[0], where, bound), _ord(t[1], where)))
        if "tail_base" in entry:
            tails.append((_ord(entry["tail_base"], where, bound),
                          _ord(entry["tail_step"], where)))
        ot = entry.get("order_type")
        specs.append(TableSpec(beta, prefix, tuple(tails),
                               _ord(ot, where) if ot is not None else None))
    return table_provider(specs, bound, fallback=bool(raw.get("fallback", False)))


def _build_phi(raw: Optional[Mapping], bound: Ordinal, name: str) -> Optional[PhiFamily]:
    if raw is None:
        return None
    theta = _ord(raw["theta"], f"{name}.phi.theta")
    points = [_ord(v, f"{name}.phi.theta_points", bound)
              for v in raw.get("theta_points", [])]
    ladders = {}
    for key, spec in (raw.get("ladders") or {}).items():
        point = _ord(key, f"{name}.phi.ladders", bound)
        ladders[point] = (_ord(spec["base"], f"{name}.phi.ladders[{key}]", bound),
                          _ord(spec["step"], f"{name}.phi.ladders[{key}]"))
    missing = [p for p in points if p not in ladders]
    if missing:
        raise ValidationError(f"{name}: theta point {missing[0]} has no ladder")
    return PhiFamily(theta, ladders)


def _build_set_cseq(raw, fpsets: Dict[str, FpSet], bound: Ordinal,
                    name: str) -> SetCSeq:
    overrides = []
    for entry in raw or []:
        where = f"{name}.set_cseq"
        target = entry.get("set")
        if isinstance(target, str):
            if target not in fpsets:
                raise ValidationError(f"{where}: unknown set {target!r}")
            x = fpsets[target]
        else:
            x = FpSet(_parts(target, where, bound))
        club_parts = [Part(v, ONE, 1)
                      for v in (_ord(q, where, bound) for q in entry.get("prefix", []))]
        for t in entry.get("tails", []):
            club_parts.append(Part(_ord(t[0], where, bound), _ord(t[1], where), None))
        if "tail_base" in entry:
            club_parts.append(Part(_ord(entry["tail_base"], where, bound),
                                   _ord(entry["tail_step"], where), None))
        overrides.append((x, FpSet(club_parts)))
    return SetCSeq(overrides)


def _build_lists_block(block_name: str, raw: Mapping, provider: CSeqProvider,
                       fpsets: Dict[str, FpSet], bound: Ordinal,
                       name: str) -> ListsBlock:
    where = f"{name}.lists.{block_name}"
    pairing = PairingTable([
        (_ord(e[0], where, bound), int(e[1]), _ord(e[2], where, bound))
        for e in raw.get("pairing", [])])
    family = tuple(frozenset(_ord(v, where, bound) for v in xs)
                   for xs in raw.get("family", []))
    hull_rows = raw.get("hulls", [])
    if hull_rows and len(hull_rows) != len(family):
        raise ValidationError(f"{where}: hulls must match the family, one per member")
    hulls = {}
    for x, hull in zip(family, hull_rows):
        hulls[x] = frozenset(_ord(v, where, bound) for v in hull)
    ctx = ListContext(
        family=family, hulls=hulls, provider=provider, pairing=pairing,
        mode=raw.get("mode", "plain-sup"),
        target_set=frozenset(_ord(v, where, bound)
                             for v in raw.get("target_set", [])))
    fam = None
    if "indexed_family" in raw:
        spec = raw["indexed_family"]
        if spec.get("kind") == "bits":
            fam = IndexedFamily("bits", bits=int(spec["n"]))
        elif spec.get("kind") == "gset":
            gsets = {}
            for idx, nm in spec.get("sets", {}).items():
                if nm not in fpsets:
                    raise ValidationError(f"{where}: unknown set {nm!r} in indexed family")
                gsets[_ord(idx, where, bound)] = fpsets[nm]
            fam = IndexedFamily("gset", gsets=gsets)
        else:
            raise ValidationError(f"{where}: unknown indexed family kind")
    pool = None
    if "pool" in raw:
        spec = raw["pool"]
        ladders = []
        for nm in spec.get("ladders", []):
            if nm not in fpsets:
                raise ValidationError(f"{where}: unknown pool ladder {nm!r}")
            ladders.append(fpsets[nm])
        pool = CandidatePool(
            grid=tuple(_ord(v, where, bound) for v in spec.get("grid", [])),
            max_size=int(spec.get("max_size", 1)),
            ladders=tuple(ladders))
    return ListsBlock(block_name, ctx, int(raw.get("bound", 2)), fam, pool)
