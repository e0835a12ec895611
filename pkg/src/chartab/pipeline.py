"""Scripted verification sessions: parse a step file, run it, report.

A script is line oriented: one step per line, shell-style quoting,

    KIND key=value key=value ...

Blank lines and lines starting with '#' are skipped.  Values parse as
JSON when possible (numbers, lists, true/false/null) and otherwise stay
bare strings.  All class indices in scripts and reports are 1-based;
conversion to the 0-based library API happens here and nowhere else.

Step kinds:

    load             bring a table into the environment (file, direct
                     product, or factor table)
    fuse             possible class fusions, or a working partial fusion
    induce           characters from subgroup data (trivial induction,
                     irreducibles along a map, inflation, cyclic
                     subgroups, scatter of values along a partial map)
    decompose        multiplicity vectors, or an exact linear solve for
                     a restriction in terms of candidate constituents
    extend-head      grow class data of a table head; finalize it
    solve-powermaps  initialize/transfer/commute/freeze power ParaMaps
    resolve-pair     fix a Galois pair in the power maps via sqrt(d)
    choose           a free or externally justified assignment; always
                     carries why=...
    complete-character  congruence completion, torso search, or
                     installing a character list on a table
    lll              reduce / lll / symmetrize / collect workflows
    oracle-extract   match classes of a reference table and verify its
                     characters by lattice membership
    assert           read-only checkpoints (see _ASSERTS)

Reports are deterministic: step text is echoed, every expect-* becomes
a `check` line, audit lines appear verbatim, and the last line is
`result: PASS (n checkpoints)` or `result: FAIL (step k, line l)`.
A failed check prints expected and got values and aborts the run.
"""

from __future__ import annotations

import itertools
import json
import shlex
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import sympy

from . import classfun, fusion, headbuilder, lattice, permchar, powermap
from .cyclo import Cyclotomic, cyc, encode_cyclotomic, encode_int, field_contains_sqrt
from .table import (
    CharacterTable,
    ClassFunction,
    centre_classes,
    direct_product_table,
    factor_table,
    normal_subgroups,
    pcore_classes,
    permutation_is_table_automorphism,
    positions_of_order,
    power_map,
    transforming_permutations,
    validate_table,
)
from .tableio import encode_map, load_table


class ScriptError(Exception):
    """Malformed script: grammar, unknown kind or parameter."""


class StepFailure(Exception):
    """A step failed at run time; .lines carry the report fragment."""

    def __init__(self, lines):
        if isinstance(lines, str):
            lines = [lines]
        self.lines = list(lines)
        super().__init__(self.lines[0] if self.lines else "step failed")


# -- parsing -----------------------------------------------------------------

_KINDS = {
    "load", "decompose", "induce", "extend-head", "solve-powermaps",
    "resolve-pair", "choose", "complete-character", "fuse", "lll",
    "oracle-extract", "assert",
}


@dataclass
class ScriptStep:
    kind: str
    params: dict
    line: int
    text: str


def _split_top(inner: str) -> list[str]:
    """Split on commas outside brackets."""
    parts, depth, cur = [], 0, []
    for ch in inner:
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        depth += ch in "[{"
        depth -= ch in "]}"
        cur.append(ch)
    parts.append("".join(cur))
    return parts


def _parse_value(tok: str):
    try:
        return json.loads(tok)
    except json.JSONDecodeError:
        pass
    # bare-string lists: quoting is eaten by the tokenizer, so [a,b] is fine
    if tok.startswith("[") and tok.endswith("]"):
        inner = tok[1:-1].strip()
        if not inner:
            return []
        return [_parse_value(x.strip()) for x in _split_top(inner)]
    return tok


def parse_script(text: str) -> list[ScriptStep]:
    steps = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            toks = shlex.split(line, comments=True)
        except ValueError as err:
            raise ScriptError(f"line {no}: {err}") from None
        if not toks:
            continue
        kind = toks[0]
        if kind not in _KINDS:
            raise ScriptError(f"line {no}: unknown step kind {kind!r}")
        params = {}
        for tok in toks[1:]:
            if "=" not in tok:
                raise ScriptError(f"line {no}: expected key=value, got {tok!r}")
            key, _, val = tok.partition("=")
            if not key:
                raise ScriptError(f"line {no}: empty parameter name in {tok!r}")
            if key in params:
                raise ScriptError(f"line {no}: duplicate parameter {key!r}")
            params[key] = _parse_value(val)
        if kind == "choose" and not params.get("why"):
            raise ScriptError(f"line {no}: choose step requires why=...")
        steps.append(ScriptStep(kind, params, no, " ".join(toks)))
    return steps


class _Params:
    """Parameter access with consumption tracking (typos fail loudly)."""

    _MISSING = object()

    def __init__(self, step: ScriptStep):
        self.step = step
        self._used = set()

    def take(self, key, default=_MISSING):
        self._used.add(key)
        if key in self.step.params:
            return self.step.params[key]
        if default is self._MISSING:
            raise StepFailure(f"  error: step needs parameter {key}=")
        return default

    def has(self, key):
        return key in self.step.params

    def finish(self):
        extra = sorted(set(self.step.params) - self._used)
        if extra:
            raise ScriptError(
                f"line {self.step.line}: unknown parameter(s) "
                + ", ".join(extra)
            )


# -- reporting ---------------------------------------------------------------


@dataclass
class Report:
    lines: list = field(default_factory=list)
    ok: bool = False
    checkpoints: int = 0

    @property
    def text(self) -> str:
        return "\n".join(self.lines) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.text)


def _fmt(value) -> str:
    """Canonical rendering for report lines; JSON-compatible, compact."""
    return json.dumps(value, separators=(",", ":"))


def _pos1(indices) -> list:
    return [i + 1 for i in indices]


def _value_out(v):
    """Character value as a script literal (int, "num/den" or cyclo dict)."""
    if v is None:
        return None
    return encode_cyclotomic(v)


def _as_int(v) -> int:
    if isinstance(v, Cyclotomic):
        return v.int_value()
    if isinstance(v, Fraction):
        if v.denominator != 1:
            raise StepFailure(f"  error: {v} is not an integer")
        return v.numerator
    return int(v)


def _values_out(seq) -> list:
    return [_value_out(v) for v in seq]


def _cycles_1based(perm) -> list[list[int]]:
    """Nontrivial cycles of a 0-based permutation list, 1-based output."""
    seen = set()
    cycles = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc_ = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc_.append(j)
            seen.add(j)
            j = perm[j]
        cycles.append([k + 1 for k in cyc_])
    return cycles


# -- exact linear solving over character values --------------------------------


def _echelon_feed(ech, row, tag):
    """Reduce row against ech; append a new pivot row when nonzero.

    ech rows are (values, coeffs, pivot); coeffs track the combination of
    fed rows (by tag index) that produced the values.  Returns True when
    the row extended the span."""
    v = [cyc(x) for x in row]
    c = {tag: cyc(1)} if tag is not None else {}
    for vals, coeffs, piv in ech:
        f = v[piv]
        if not f.is_zero():
            v = [a - f * b for a, b in zip(v, vals)]
            for k, x in coeffs.items():
                c[k] = c.get(k, cyc(0)) - f * x
    piv = next((j for j, x in enumerate(v) if not x.is_zero()), None)
    if piv is None:
        return False, c
    inv = v[piv].inverse()
    v = [a * inv for a in v]
    c = {k: x * inv for k, x in c.items()}
    ech.append((v, c, piv))
    return True, c


def solve_combination(rows, target):
    """Coefficients c with sum c_k rows[k] = target, or None.

    Exact Gaussian elimination over the cyclotomic field.  Pivot rows are
    taken greedily in input order and free coefficients stay zero, so the
    particular solution is deterministic.
    """
    ech = []
    for k, row in enumerate(rows):
        _echelon_feed(ech, row, k)
    v = [cyc(x) for x in target]
    c = {}
    for vals, coeffs, piv in ech:
        f = v[piv]
        if not f.is_zero():
            v = [a - f * b for a, b in zip(v, vals)]
            for k, x in coeffs.items():
                c[k] = c.get(k, cyc(0)) + f * x
    if any(not x.is_zero() for x in v):
        return None
    return [c.get(k, cyc(0)) for k in range(len(rows))]


def matrix_rank(rows) -> int:
    ech = []
    for row in rows:
        _echelon_feed(ech, row, None)
    return len(ech)


def _commute_maps(pa, pb):
    """Narrow two power ParaMaps so that pa(pb(i)) = pb(pa(i)) can hold.

    Arc consistency to a fixpoint, in place.  Returns False when some
    entry loses all candidates.
    """
    cands = fusion.entry_candidates

    def narrow(pmap, j, allowed):
        old = cands(pmap[j])
        new = [x for x in old if x in allowed]
        if not new:
            return None
        if len(new) != len(old):
            pmap[j] = fusion.normalize_entry(new)
            return True
        return False

    changed = True
    while changed:
        changed = False
        for i in range(len(pa)):
            left = set()   # pa(pb(i))
            for j in cands(pb[i]):
                left.update(cands(pa[j]))
            right = set()  # pb(pa(i))
            for k in cands(pa[i]):
                right.update(cands(pb[k]))
            meet = left & right
            if not meet:
                return False
            if isinstance(pb[i], int):
                r = narrow(pa, pb[i], meet)
                if r is None:
                    return False
                changed |= r
            if isinstance(pa[i], int):
                r = narrow(pb, pa[i], meet)
                if r is None:
                    return False
                changed |= r
            # drop intermediate candidates that cannot reach the meet
            keep = [j for j in cands(pb[i]) if set(cands(pa[j])) & meet]
            if not keep:
                return False
            if len(keep) != len(cands(pb[i])):
                pb[i] = fusion.normalize_entry(keep)
                changed = True
            keep = [k for k in cands(pa[i]) if set(cands(pb[k])) & meet]
            if not keep:
                return False
            if len(keep) != len(cands(pa[i])):
                pa[i] = fusion.normalize_entry(keep)
                changed = True
    return True


# -- the runner ----------------------------------------------------------------


class _Runner:
    def __init__(self, steps, data_dir):
        self.steps = steps
        self.data_dir = Path(data_dir) if data_dir is not None else None
        self.env: dict = {}
        self.report = Report()
        self._audit_seen: dict = {}

    # ---- report helpers

    def note(self, line: str):
        self.report.lines.append(line)

    def check(self, label: str, got, want):
        self.report.checkpoints += 1
        if got == want:
            self.note(f"  check {label} = {_fmt(got)}: ok")
        else:
            raise StepFailure([
                f"  check {label}: FAIL",
                f"    expected: {_fmt(want)}",
                f"    got:      {_fmt(got)}",
            ])

    def maybe_check(self, p: _Params, key: str, got_fn):
        """Run one expect-* checkpoint when the script asks for it."""
        if p.has(key):
            want = p.take(key)
            self.check(key.removeprefix("expect-"), got_fn(), want)

    def flush_audit(self, name, head):
        seen = self._audit_seen.get(name, 0)
        for line in head.audit_log[seen:]:
            self.note(line)
        self._audit_seen[name] = len(head.audit_log)

    # ---- environment lookup

    def lookup(self, name):
        """Env name, or `name.attr`, `name.k` (1-based) chains after it.

        Identifiers may contain dots themselves, so the longest known
        name wins before any attribute resolution starts."""
        if not isinstance(name, str):
            raise StepFailure(f"  error: expected an object name, got {name!r}")
        if name in self.env:
            return self.env[name]
        base = max((k for k in self.env if name.startswith(k + ".")),
                   key=len, default=None)
        if base is None:
            raise StepFailure(f"  error: unknown object {name!r}")
        obj = self.env[base]
        for part in name[len(base) + 1:].split("."):
            if part.isdigit():
                seq = list(obj)
                i = int(part) - 1
                if not 0 <= i < len(seq):
                    raise StepFailure(
                        f"  error: index {part} out of range in {name!r}")
                obj = seq[i]
            elif hasattr(obj, part):
                obj = getattr(obj, part)
            else:
                raise StepFailure(f"  error: unknown object {name!r}")
        return obj

    def table(self, name) -> CharacterTable:
        obj = self.lookup(name)
        if not isinstance(obj, CharacterTable):
            raise StepFailure(f"  error: {name!r} is not a table")
        return obj

    def charlist(self, ref) -> list:
        """A list of class functions from a name, or a list of names."""
        if isinstance(ref, list):
            out = []
            for r in ref:
                out.extend(self.charlist(r))
            return out
        obj = self.lookup(ref)
        if isinstance(obj, ClassFunction):
            return [obj]
        if isinstance(obj, classfun.Reduction):
            raise StepFailure(
                f"  error: {ref!r} is a reduction; name .irreducibles or "
                f".remainders")
        try:
            items = list(obj)
        except TypeError:
            raise StepFailure(f"  error: {ref!r} is not a character list")
        for x in items:
            if not isinstance(x, ClassFunction):
                raise StepFailure(f"  error: {ref!r} is not a character list")
        return items

    def paramap(self, ref) -> list:
        obj = self.lookup(ref)
        if not isinstance(obj, list):
            raise StepFailure(f"  error: {ref!r} is not a class map")
        return obj

    def classmap(self, ref) -> list:
        """A single (possibly partial) class map; unwraps a 1-element
        candidate list from a fusion search."""
        pm = self.paramap(ref)
        if pm and isinstance(pm[0], list):
            if len(pm) != 1:
                raise StepFailure(
                    f"  error: {ref!r} holds {len(pm)} candidate maps, "
                    f"need exactly one")
            pm = pm[0]
        return pm

    def values(self, ref) -> list:
        """A mutable value list (entries None where unknown)."""
        obj = self.lookup(ref)
        if isinstance(obj, ClassFunction):
            return list(obj.values)
        if isinstance(obj, list):
            return obj
        raise StepFailure(f"  error: {ref!r} is not a value list")

    def store(self, name, obj):
        if not isinstance(name, str) or not name:
            raise StepFailure(f"  error: bad store name {name!r}")
        self.env[name] = obj

    # ---- run loop

    def run(self) -> Report:
        for idx, step in enumerate(self.steps, start=1):
            self.note(f"[{idx}] {step.text}")
            params = _Params(step)
            try:
                handler = getattr(self, "_do_" + step.kind.replace("-", "_"))
                handler(params)
                params.finish()
            except StepFailure as err:
                self.report.lines.extend(err.lines)
                self.report.lines.append(
                    f"result: FAIL (step {idx}, line {step.line})")
                self.report.ok = False
                return self.report
            except ScriptError:
                raise
            except ValueError as err:
                self.report.lines.append(f"  error: {err}")
                self.report.lines.append(
                    f"result: FAIL (step {idx}, line {step.line})")
                self.report.ok = False
                return self.report
        self.report.ok = True
        self.report.lines.append(
            f"result: PASS ({self.report.checkpoints} checkpoints)")
        return self.report

    # ---- step: load

    def _do_load(self, p: _Params):
        ident = p.take("id")
        name = p.take("as", ident)
        if p.has("file"):
            fname = p.take("file")
            path = (self.data_dir / fname) if self.data_dir else Path(fname)
            if not path.is_file():
                raise StepFailure(
                    f"  error: table {ident}: missing data file {fname}")
            t = load_table(path)
            if t.identifier != ident:
                raise StepFailure(
                    f"  error: table {ident}: file {fname} holds "
                    f"{t.identifier!r}")
        elif p.has("product"):
            parts = p.take("product")
            t = direct_product_table(self.table(parts[0]), self.table(parts[1]))
            for other in parts[2:]:
                t = direct_product_table(t, self.table(other))
            if t.identifier != ident:
                raise StepFailure(
                    f"  error: product table is named {t.identifier!r}, "
                    f"not {ident!r}")
        elif p.has("factor-of"):
            src = self.table(p.take("factor-of"))
            kernel = [k - 1 for k in p.take("kernel")]
            t, _ = factor_table(src, kernel, identifier=ident)
        else:
            raise StepFailure("  error: load needs file=, product= or factor-of=")
        self.store(name, t)
        self.note(f"  loaded {t.identifier}: {t.nclasses} classes, "
                  f"order {t.order}")
        self.maybe_check(p, "expect-classes", lambda: t.nclasses)
        self.maybe_check(p, "expect-order", lambda: t.order)

    # ---- step: fuse

    def _chars_param(self, p: _Params, amb):
        """chars= is an env name, a list of names, or "none" (no pruning)."""
        if not p.has("chars"):
            return None
        val = p.take("chars")
        if val == "none":
            return ()
        return self.charlist(val)

    def _prescribed_param(self, p: _Params, sub, amb):
        if not p.has("prescribed"):
            return None
        val = p.take("prescribed")
        if val == "stored":
            pm = sub.fusion_into(amb)
            if pm is None:
                raise StepFailure(
                    f"  error: no stored fusion from {sub.identifier} into "
                    f"{amb.identifier}")
        else:
            pm = self.paramap(val)
        return {i: e for i, e in enumerate(pm) if e is not None}

    def _do_fuse(self, p: _Params):
        sub = self.table(p.take("from"))
        amb = self.table(p.take("into"))
        mode = p.take("mode", "possible")
        if mode == "possible":
            maps = fusion.possible_class_fusions(
                sub, amb,
                prescribed=self._prescribed_param(p, sub, amb),
                chars=self._chars_param(p, amb),
            )
            self.note(f"  {len(maps)} possible fusions from {sub.identifier} "
                      f"into {amb.identifier}")
            self.maybe_check(p, "expect-count", lambda: len(maps))
            self.maybe_check(p, "expect-nonempty", lambda: bool(maps))
            self.maybe_check(
                p, "expect-indeterminateness",
                lambda: [fusion.indeterminateness(m) for m in maps])
            if p.has("store"):
                self.store(p.take("store"), maps)
        elif mode == "init":
            base = fusion.init_fusion(sub, amb)
            stored = sub.fusion_into(amb)
            if stored is not None:
                prescribed = {i: e for i, e in enumerate(stored)
                              if e is not None}
                base = fusion.merge_prescribed(base, prescribed)
                if base is None:
                    raise StepFailure(
                        f"  error: fusion problem between {sub.identifier} "
                        f"and {amb.identifier}")
            self.note(f"  initialized fusion {sub.identifier} -> "
                      f"{amb.identifier}")
            self.maybe_check(p, "expect-indeterminateness",
                             lambda: fusion.indeterminateness(base))
            self.store(p.take("store"), base)
        else:
            raise StepFailure(f"  error: unknown fuse mode {mode!r}")

    # ---- step: induce

    def _via_map(self, p: _Params, sub, amb):
        """via= names a total map, a length-1 candidate list, or "stored"."""
        val = p.take("via")
        if val == "stored":
            pm = sub.fusion_into(amb)
            if pm is None:
                raise StepFailure(
                    f"  error: no stored fusion from {sub.identifier} into "
                    f"{amb.identifier}")
        else:
            pm = self.classmap(val)
        if not fusion.is_total(pm):
            raise StepFailure(f"  error: class map {val!r} is not total")
        return pm

    def _do_induce(self, p: _Params):
        mode = p.take("mode", "induce")
        if mode == "induce":
            what = p.take("what")
            sub = self.table(p.take("from"))
            amb = self.table(p.take("into"))
            if what == "trivial" and not p.has("via"):
                try:
                    out = permchar.trivial_induction_candidates(
                        sub, amb,
                        prescribed=self._prescribed_param(p, sub, amb),
                        chars=self._chars_param(p, amb),
                        faithful_only=p.take("filter", None) == "faithful",
                    )
                except ValueError as err:
                    raise StepFailure(f"  error: {err}")
            else:
                fmap = self._via_map(p, sub, amb)
                if what == "trivial":
                    chars = [sub.trivial_character()]
                elif what == "irreducibles":
                    chars = list(sub.irreducibles)
                else:
                    chars = self.charlist(what)
                out = classfun.induce_by_fusion(sub, amb, chars, fmap)
            self.note(f"  induced {len(out)} characters from {sub.identifier} "
                      f"to {amb.identifier}")
        elif mode == "inflate":
            src = self.table(p.take("from"))
            big = self.table(p.take("into"))
            fmap = big.fusion_into(src)
            if fmap is None or not fusion.is_total(fmap):
                raise StepFailure(
                    f"  error: no stored factor fusion from {big.identifier} "
                    f"onto {src.identifier}")
            out = [classfun.pull_back(chi, fmap, big)
                   for chi in self.charlist(p.take("what"))]
            self.note(f"  inflated {len(out)} characters from "
                      f"{src.identifier} to {big.identifier}")
        elif mode == "restrict":
            amb = self.table(p.take("of-table"))
            sub = self.table(p.take("onto"))
            fmap = self._via_map(p, sub, amb)
            out = [classfun.pull_back(chi, fmap, sub)
                   for chi in self.charlist(p.take("what"))]
            self.note(f"  restricted {len(out)} characters from "
                      f"{amb.identifier} to {sub.identifier}")
        elif mode == "cyclic":
            t = self.table(p.take("in"))
            classes = p.take("classes", "nonidentity")
            if classes == "nonidentity":
                classes = list(range(1, t.nclasses))
            else:
                classes = [c - 1 for c in classes]
            out = classfun.induced_cyclic(t, classes, mode="all")
            self.note(f"  induced {len(out)} cyclic-subgroup characters "
                      f"on {t.identifier}")
        elif mode == "scatter":
            sub = self.table(p.take("from"))
            amb = self.table(p.take("into"))
            fmap = self.classmap(p.take("via"))
            chi = self.values(p.take("what"))
            name = p.take("merge-into")
            if name in self.env:
                target = self.values(name)
            else:
                target = [None] * amb.nclasses
            for i, e in enumerate(fmap):
                if not isinstance(e, int):
                    continue
                v = chi[i]
                if target[e] is None:
                    target[e] = v
                elif target[e] != v:
                    raise StepFailure(
                        f"  error: scatter from {sub.identifier} contradicts "
                        f"the value at class {e + 1} of {amb.identifier}")
            self.store(name, target)
            known = sum(1 for v in target if v is not None)
            self.note(f"  scattered values from {sub.identifier}: "
                      f"{known} of {amb.nclasses} classes known")
            self.maybe_check(p, "expect-known", lambda: known)
            return
        else:
            raise StepFailure(f"  error: unknown induce mode {mode!r}")
        self.maybe_check(p, "expect-count", lambda: len(out))
        self.maybe_check(
            p, "expect-degrees",
            lambda: [_value_out(chi.degree) for chi in out])
        if p.has("store"):
            self.store(p.take("store"), out)
        if p.has("append-to"):
            name = p.take("append-to")
            self.charlist(name)
            self.env[name] = list(self.env[name]) + list(out)

    # ---- step: decompose

    def _do_decompose(self, p: _Params):
        mode = p.take("mode", "multiplicities")
        if mode == "multiplicities":
            t = self.table(p.take("in"))
            chis = self.charlist(p.take("what"))
            if len(chis) != 1:
                raise StepFailure("  error: decompose takes a single character")
            chi = chis[0]
            vec = [classfun.scalar_product(t, chi, iota)
                   for iota in t.irreducibles]
            out = [int(m) if m.denominator == 1 else str(m) for m in vec]
            self.note(f"  multiplicities on {t.identifier}: "
                      f"max {max(out)}, support {sum(1 for m in out if m)}")
            self.maybe_check(p, "expect", lambda: out)
            self.maybe_check(p, "expect-max", lambda: max(out))
            self.maybe_check(
                p, "expect-positions-1",
                lambda: [i + 1 for i, m in enumerate(out) if m == 1])
            self.maybe_check(
                p, "expect-positions-2",
                lambda: [i + 1 for i, m in enumerate(out) if m == 2])
            if p.has("store"):
                self.store(p.take("store"), out)
        elif mode == "solve":
            sub = self.table(p.take("in"))
            target = self.values(p.take("target"))
            fmap = self.paramap(p.take("via"))
            if p.has("max-degree"):
                maxdeg = p.take("max-degree")
            else:
                if target[0] is None:
                    raise StepFailure("  error: degree of the target unknown")
                maxdeg = _as_int(target[0])
            cand = [chi for chi in sub.irreducibles
                    if chi.degree.int_value() <= maxdeg]
            known = [i for i, e in enumerate(fmap)
                     if isinstance(e, int) and target[e] is not None]
            rows = [[chi[i] for i in known] for chi in cand]
            rhs = [target[fmap[i]] for i in known]
            rank = matrix_rank(rows)
            sol = solve_combination(rows, rhs)
            self.note(f"  {len(cand)} candidate constituents on "
                      f"{sub.identifier}, rank {rank} on {len(known)} "
                      f"known classes")
            self.maybe_check(p, "expect-count", lambda: len(cand))
            self.maybe_check(p, "expect-rank", lambda: rank)
            if p.has("expect-solution"):
                want = p.take("expect-solution")
                if want == "fail":
                    self.check("solution", sol is None and "fail", "fail")
                else:
                    got = None if sol is None else _values_out(sol)
                    self.check("solution", got, want)
            if sol is None:
                self.note("  no solution")
                return
            if p.has("store"):
                self.store(p.take("store"), sol)
            if p.has("store-combination"):
                acc = [cyc(0)] * sub.nclasses
                for c, chi in zip(sol, cand):
                    if not c.is_zero():
                        acc = [a + c * v for a, v in zip(acc, chi.values)]
                self.store(p.take("store-combination"),
                           ClassFunction(sub, acc))
        else:
            raise StepFailure(f"  error: unknown decompose mode {mode!r}")

    # ---- step: extend-head

    def _head(self, name) -> headbuilder.TableHead:
        obj = self.lookup(name)
        if not isinstance(obj, headbuilder.TableHead):
            raise StepFailure(f"  error: {name!r} is not a table head")
        return obj

    def _do_extend_head(self, p: _Params):
        name = p.take("head")
        if p.has("order"):
            ident = p.take("id", name)
            head = headbuilder.TableHead(ident, p.take("order"))
            self.store(name, head)
            self.note(f"  head {ident}: 1 class")
            return
        if p.has("copy-of"):
            src = self._head(p.take("copy-of"))
            head = src.copy()
            self.store(name, head)
            self._audit_seen[name] = len(head.audit_log)
            self.note(f"  head {name}: copy with {head.nclasses} classes")
            return
        head = self._head(name)
        if p.has("finalize"):
            out = p.take("finalize")
            t = headbuilder.finalize_head(head)
            self.store(out, t)
            self.note(f"  finalized {t.identifier}: {t.nclasses} classes")
            self.maybe_check(p, "expect-classes", lambda: t.nclasses)
            return
        if p.has("store-fusions-into"):
            t = self.table(p.take("store-fusions-into"))
            for rec in head.fusions:
                rec.sub.store_fusion(t, list(rec.map))
            self.note(f"  stored {len(head.fusions)} partial fusions "
                      f"into {t.identifier}")
            return
        method = p.take("method")
        if method == "root-classes":
            sub = self.table(p.take("sub"))
            found = headbuilder.extend_by_root_classes(
                head, sub, p.take("pos") - 1)
            self.flush_audit(name, head)
            self.maybe_check(p, "expect-found", lambda: found)
        elif method == "order":
            cent = p.take("cent")
            if p.has("sub"):
                sub = self.table(p.take("sub"))
                positions = [i - 1 for i in p.take("positions")]
                headbuilder.extend_by_centralizer_order(
                    head, sub, cent, positions)
            else:
                headbuilder.extend_by_centralizer_order(
                    head, p.take("order-of-element"), cent)
            self.flush_audit(name, head)
        elif method == "permchar":
            sub = self.table(p.take("sub"))
            pi = self.charlist(p.take("pi"))[0]
            positions = [i - 1 for i in p.take("positions")]
            headbuilder.extend_by_perm_char_value(head, sub, pi, positions)
            self.flush_audit(name, head)
            self.maybe_check(p, "expect-cent",
                             lambda: head.centralizers[-1])
        else:
            raise StepFailure(f"  error: unknown extend-head method {method!r}")
        self.maybe_check(p, "expect-total", lambda: head.nclasses)

    # ---- step: solve-powermaps

    def _fusion_pairs(self, ids, amb):
        pairs = []
        for ident in ids:
            sub = self.table(ident)
            fus = self.paramap("fus:" + ident)
            if len(fus) != sub.nclasses:
                raise StepFailure(
                    f"  error: working fusion fus:{ident} has wrong length")
            pairs.append((sub, fus))
        return pairs

    def _transfer_sweep(self, t, maps, pairs, primes):
        """Transfer diagrams over all (prime, fusion) pairs to a fixpoint."""
        rounds = 0
        while True:
            rounds += 1
            changed = False
            for q in primes:
                for sub, fus in pairs:
                    res = fusion.transfer_diagram(
                        power_map(sub, q), fus, maps[q])
                    if res is None:
                        raise StepFailure(
                            f"  error: power map transfer contradiction at "
                            f"prime {q} between {sub.identifier} and "
                            f"{t.identifier}")
                    changed = changed or res.improved
            if not changed:
                return rounds

    def _do_solve_powermaps(self, p: _Params):
        mode = p.take("mode")
        if mode == "init":
            t = self.table(p.take("head"))
            maxorder = max(t.orders)
            self.maybe_check(p, "expect-maxorder", lambda: maxorder)
            primes = list(sympy.primerange(2, maxorder + 1))
            maps = {q: powermap.init_power_map(t, q) for q in primes}
            pairs = self._fusion_pairs(p.take("fusions"), t)
            rounds = 0
            while True:
                self.note("#I start a round")
                rounds += 1
                changed = False
                for q in primes:
                    for sub, fus in pairs:
                        res = fusion.transfer_diagram(
                            power_map(sub, q), fus, maps[q])
                        if res is None:
                            raise StepFailure(
                                f"  error: power map transfer contradiction "
                                f"at prime {q} between {sub.identifier} and "
                                f"{t.identifier}")
                        changed = changed or res.improved
                if not changed:
                    break
            self.maybe_check(p, "expect-rounds", lambda: rounds)
            self.store(p.take("store"), maps)
        elif mode == "copy":
            maps = self.lookup(p.take("from"))
            self.store(p.take("store"),
                       {q: list(m) for q, m in maps.items()})
            self.note("  copied power maps")
        elif mode == "transfer":
            t = self.table(p.take("head"))
            maps = self.lookup(p.take("maps"))
            pairs = self._fusion_pairs(p.take("fusions"), t)
            primes = p.take("primes", sorted(maps))
            self._transfer_sweep(t, maps, pairs, primes)
            self.note(f"  transfer over primes {_fmt(primes)}: consistent")
        elif mode == "commute":
            maps = self.lookup(p.take("maps"))
            a, b = p.take("a"), p.take("b")
            if not _commute_maps(maps[a], maps[b]):
                raise StepFailure(
                    f"  error: power maps {a} and {b} cannot commute")
            self.note(f"  maps {a} and {b} forced to commute")
        elif mode == "consistency":
            t = self.table(p.take("head"))
            maps = self.lookup(p.take("maps"))
            pairs = self._fusion_pairs(p.take("fusions"), t)
            for sub, fus in pairs:
                sub_pms = {q: power_map(sub, q) for q in sorted(maps)}
                ok = fusion.test_consistency_maps(sub_pms, fus, maps)
                self.check(f"consistency {sub.identifier}", ok, True)
        elif mode == "freeze":
            t = self.table(p.take("head"))
            maps = self.lookup(p.take("maps"))
            for q in sorted(maps):
                for i, e in enumerate(maps[q]):
                    if not isinstance(e, int):
                        raise StepFailure(
                            f"  error: power map for prime {q} still open "
                            f"at class {i + 1}")
            t.power_maps = {q: tuple(m) for q, m in maps.items()}
            self.note(f"  stored {len(maps)} power maps on {t.identifier}")
        else:
            raise StepFailure(f"  error: unknown solve-powermaps mode {mode!r}")

    # ---- step: resolve-pair

    def _do_resolve_pair(self, p: _Params):
        t = self.table(p.take("head"))
        a, b = p.take("pair")
        d = p.take("d")
        maps = self.lookup(p.take("maps"))
        powermap.resolve_quadratic_pair(t, (a - 1, b - 1), d, maps=maps)
        self.note(f"  resolved pair [{a},{b}] with d = {d}")

    # ---- step: choose

    def _do_choose(self, p: _Params):
        why = p.take("why")
        what = p.take("what")
        if what == "char":
            if p.has("of"):
                chars = self.charlist(p.take("of"))
            else:
                t = self.table(p.take("in"))
                maxdeg = p.take("max-degree")
                chars = [chi for chi in t.irreducibles
                         if chi.degree.int_value() <= maxdeg]
                if p.has("positions"):
                    pos = p.take("positions")
                    chars = [chars[i - 1] for i in pos]
            total = chars[0]
            for chi in chars[1:]:
                total = total + chi
            self.store(p.take("store"), total)
            self.note(f"  choose char: sum of {len(chars)} characters, "
                      f"degree {_value_out(total.degree)}")
        elif what == "fusion-entry":
            classes = p.take("classes") if p.has("classes") else [p.take("class")]
            values = p.take("values") if p.has("values") else [p.take("value")]
            names = p.take("fusions")
            if not isinstance(names, list):
                names = [names]
            for nm in names:
                fus = self.paramap(nm)
                for k, v in zip(classes, values):
                    cands = fusion.entry_candidates(fus[k - 1])
                    if v - 1 not in cands:
                        raise StepFailure(
                            f"  error: class {v} is not a candidate image "
                            f"of class {k} in {nm}")
                    fus[k - 1] = v - 1
            self.note(f"  choose fusion entries {_fmt(classes)} -> "
                      f"{_fmt(values)} in {', '.join(names)}")
        elif what == "powermap":
            maps = self.lookup(p.take("maps"))
            q = p.take("p")
            classes = p.take("classes") if p.has("classes") else [p.take("class")]
            if p.has("copy-from"):
                src = p.take("copy-from")
                val = maps[q][src - 1]
                if not isinstance(val, int):
                    raise StepFailure(
                        f"  error: power map entry at class {src} is still "
                        f"open, cannot copy it")
                values = [val + 1] * len(classes)
            else:
                values = p.take("values") if p.has("values") else [p.take("value")]
            for k, v in zip(classes, values):
                cands = fusion.entry_candidates(maps[q][k - 1])
                if v - 1 not in cands:
                    raise StepFailure(
                        f"  error: class {v} is not a candidate {q}-th power "
                        f"of class {k}")
                maps[q][k - 1] = v - 1
            self.note(f"  choose power map p={q}: classes {_fmt(classes)} -> "
                      f"{_fmt(values)}")
        elif what == "branch":
            keep = p.take("keep")
            drop = p.take("drop")
            self.note(f"  choose branch: keep {keep}, drop {drop}")
        else:
            raise StepFailure(f"  error: unknown choose target {what!r}")
        self.note(f"    why: {why}")

    # ---- step: complete-character

    def _do_complete_character(self, p: _Params):
        mode = p.take("mode", "congruence")
        if mode == "congruence":
            t = self.table(p.take("table"))
            name = p.take("values")
            vals = [None if v is None else _as_int(v)
                    for v in self.values(name)]
            filled, rep = classfun.complete_rational_character(t, vals)
            for line in rep.lines():
                self.note(line)
            self.maybe_check(
                p, "expect-congruences",
                lambda: [[i + 1, o, encode_int(c), res, mod]
                         for i, o, c, res, mod in rep.congruences])
            missing_after = sorted(
                [i for i, v in enumerate(filled) if v is None]
                + ([rep.final_fill[0]] if rep.final_fill else []))
            self.maybe_check(p, "expect-missing-after",
                             lambda: _pos1(missing_after))
            if rep.final_fill:
                i, v, s = rep.final_fill
                self.note(f"#I class {i + 1} filled with {v} from the "
                          f"weighted sum {s}")
                self.maybe_check(p, "expect-fill-class", lambda: i + 1)
                self.maybe_check(p, "expect-fill-value", lambda: v)
                self.maybe_check(p, "expect-class-sum",
                                 lambda: encode_int(s))
            out = p.take("store", name)
            if all(v is not None for v in filled):
                self.store(out, ClassFunction(t, filled))
            else:
                self.store(out, filled)
        elif mode == "permchar":
            t = self.table(p.take("table"))
            nonfaithful = self.charlist(p.take("nonfaithful"))[0]
            centre = [i - 1 for i in p.take("centre")]
            z = centre[1]
            torso = [None] * t.nclasses
            torso[0] = 2 * nonfaithful.degree.int_value()
            torso[z] = 0
            out = permchar.perm_chars_with_torso(t, torso, centre, nonfaithful)
            self.note(f"  {len(out)} permutation characters with the "
                      f"prescribed torso on {t.identifier}")
            self.maybe_check(p, "expect-count", lambda: len(out))
            if p.has("store"):
                self.store(p.take("store"), out)
        elif mode == "install":
            t = self.table(p.take("table"))
            chars = self.charlist(p.take("chars"))
            if len(chars) != t.nclasses:
                raise StepFailure(
                    f"  error: {len(chars)} characters cannot be the "
                    f"irreducibles of a table with {t.nclasses} classes")
            t.irreducibles = tuple(chars)
            self.note(f"  installed {len(chars)} irreducibles on "
                      f"{t.identifier}")
        else:
            raise StepFailure(
                f"  error: unknown complete-character mode {mode!r}")

    # ---- step: lll

    def _do_lll(self, p: _Params):
        mode = p.take("mode")
        if mode == "reduce":
            t = self.table(p.take("in"))
            known = self.charlist(p.take("known"))
            chars = self.charlist(p.take("chars"))
            red = classfun.reduce_by_irreducibles(t, known, chars)
            self.note(f"  reduced {len(chars)} characters: "
                      f"{len(red.irreducibles)} new irreducibles, "
                      f"{len(red.remainders)} remainders")
        elif mode == "lll":
            t = self.table(p.take("in"))
            chars = self.charlist(p.take("chars"))
            red = lattice.lll_reduce(t, chars)
            self.note(f"  lll on {len(chars)} characters: "
                      f"{len(red.irreducibles)} norm-1 vectors, "
                      f"{len(red.remainders)} remainders")
        elif mode == "symmetrize":
            t = self.table(p.take("in"))
            chars = self.charlist(p.take("chars"))
            out = []
            for chi in chars:
                sym, alt = classfun.symmetrize2(t, chi)
                out.extend([sym, alt])
            self.store(p.take("store"), out)
            self.note(f"  {len(out)} degree-2 symmetrizations")
            self.maybe_check(p, "expect-count", lambda: len(out))
            return
        elif mode == "collect":
            name = p.take("into")
            coll = list(self.env.get(name, []))
            seen = {chi.values for chi in coll}
            added = 0
            for ref in p.take("add"):
                if isinstance(ref, str) and ref.startswith("trivial:"):
                    chars = [self.table(ref.split(":", 1)[1]).trivial_character()]
                else:
                    chars = self.charlist(ref)
                for chi in chars:
                    if chi.values not in seen:
                        seen.add(chi.values)
                        coll.append(chi)
                        added += 1
            self.store(name, coll)
            self.note(f"  collected {added} new characters into {name} "
                      f"({len(coll)} total)")
            self.maybe_check(p, "expect-total", lambda: len(coll))
            return
        else:
            raise StepFailure(f"  error: unknown lll mode {mode!r}")
        self.maybe_check(p, "expect-new", lambda: len(red.irreducibles))
        self.maybe_check(p, "expect-remainders", lambda: len(red.remainders))
        if p.has("store"):
            self.store(p.take("store"), red)

    # ---- step: oracle-extract

    def _do_oracle_extract(self, p: _Params):
        mode = p.take("mode")
        if mode == "match":
            t = self.table(p.take("in"))
            ref = self.table(p.take("reference"))
            chi = self.charlist(p.take("using"))[0]
            refdeg = p.take("ref-char-degree")
            refchis = [x for x in ref.irreducibles if x.degree == refdeg]
            if len(refchis) != 1:
                raise StepFailure(
                    f"  error: reference table has {len(refchis)} "
                    f"irreducibles of degree {refdeg}, need exactly one")
            refchi = refchis[0]
            pm_t = power_map(t, 2)
            pm_r = power_map(ref, 2)

            def key_t(i):
                return (t.orders[i], t.centralizers[i],
                        chi[i].sort_key(), chi[pm_t[i]].sort_key())

            def key_r(j):
                return (ref.orders[j], ref.centralizers[j],
                        refchi[j].sort_key(), refchi[pm_r[j]].sort_key())

            keys_t = [key_t(i) for i in range(t.nclasses)]
            keys_r = [key_r(j) for j in range(ref.nclasses)]
            if sorted(keys_t) != sorted(keys_r):
                raise StepFailure(
                    "  error: class invariants of the two tables disagree")
            distinct = len(set(keys_t))
            self.note(f"  {distinct} distinct class invariants over "
                      f"{t.nclasses} classes")
            self.maybe_check(p, "expect-distinct", lambda: distinct)

            fibers_r: dict = {}
            for j, k in enumerate(keys_r):
                fibers_r.setdefault(k, []).append(j)
            fibers = []  # (classes of t, candidate classes of ref)
            done = set()
            for i, k in enumerate(keys_t):
                if k in done:
                    continue
                done.add(k)
                mine = [x for x in range(t.nclasses) if keys_t[x] == k]
                fibers.append((mine, fibers_r[k]))
            fibers.sort(key=lambda f: (len(f[0]), f[0]))
            primes = sorted(set(t.power_maps) & set(ref.power_maps))
            pms_t = {q: power_map(t, q) for q in primes}
            pms_r = {q: power_map(ref, q) for q in primes}
            pre_t = {q: [[] for _ in range(t.nclasses)] for q in primes}
            for q in primes:
                for a, b in enumerate(pms_t[q]):
                    pre_t[q][b].append(a)

            perm = [None] * t.nclasses

            def compatible(i, j):
                for q in primes:
                    pi, pj = pms_t[q][i], pms_r[q][j]
                    if perm[pi] is not None and perm[pi] != pj:
                        return False
                    for a in pre_t[q][i]:  # assigned roots of i match up
                        if perm[a] is not None and pms_r[q][perm[a]] != j:
                            return False
                return True

            def assign(fx):
                if fx == len(fibers):
                    return True
                mine, theirs = fibers[fx]
                for imgs in itertools.permutations(theirs):
                    ok = True
                    for i, j in zip(mine, imgs):
                        if not compatible(i, j):
                            ok = False
                            break
                        perm[i] = j
                    if ok and assign(fx + 1):
                        return True
                    for i in mine:
                        perm[i] = None
                return False

            if not assign(0):
                raise StepFailure(
                    "  error: no fiber permutation aligns the power maps")
            # final full verification of the alignment
            for q in primes:
                for i in range(t.nclasses):
                    if pms_r[q][perm[i]] != perm[pms_t[q][i]]:
                        raise StepFailure(
                            "  error: power map alignment check failed")
            base = [None] * t.nclasses
            for mine, theirs in fibers:
                for i, j in zip(mine, theirs):
                    base[i] = j
            correction = [None] * ref.nclasses
            for i in range(t.nclasses):
                correction[base[i]] = perm[i]
            cycles = _cycles_1based(correction)
            shown = "".join("(" + ",".join(map(str, c)) + ")" for c in cycles)
            self.note(f"  correction permutation: {shown or '()'}")
            self.maybe_check(p, "expect-permutation", lambda: cycles)
            oracle = [ClassFunction(t, [x[perm[i]] for i in range(t.nclasses)])
                      for x in ref.irreducibles]
            self.store(p.take("store"), oracle)
        elif mode == "verify":
            t = self.table(p.take("in"))
            oracle = self.charlist(p.take("oracle"))
            name = p.take("into")
            known = list(self.charlist(name))
            basis = self.charlist(p.take("lattice"))
            seen = {chi.values for chi in known}
            added = 0
            for theta in oracle:
                if theta.values in seen:
                    continue
                if basis and lattice.integral_membership(t, basis, theta) is not None:
                    known.append(theta)
                    seen.add(theta.values)
                    added += 1
            self.env[name] = known
            self.note(f"  verified {added} oracle characters, "
                      f"now {len(known)} known")
            self.maybe_check(p, "expect-added", lambda: added)
            self.maybe_check(p, "expect-total", lambda: len(known))
        else:
            raise StepFailure(f"  error: unknown oracle-extract mode {mode!r}")

    # ---- step: assert

    def _do_assert(self, p: _Params):
        kind = p.take("kind")
        fn = _ASSERTS.get(kind)
        if fn is None:
            raise StepFailure(f"  error: unknown assert kind {kind!r}")
        fn(self, p)


# -- assert vocabulary ---------------------------------------------------------


def _factorization_string(n: int) -> str:
    parts = []
    for q, e in sorted(sympy.factorint(n).items()):
        parts.append(f"{q}^{e}" if e > 1 else f"{q}")
    return "*".join(parts)


def _a_equal(r: _Runner, p: _Params):
    a = r.lookup(p.take("a"))
    b = r.lookup(p.take("b"))
    r.check("equal", a == b, True)


def _a_length(r: _Runner, p: _Params):
    obj = r.lookup(p.take("of"))
    r.check("length", len(list(obj)), p.take("expect"))


def _a_class_count(r: _Runner, p: _Params):
    t = r.table(p.take("table"))
    r.check(f"classes of {t.identifier}", t.nclasses, p.take("expect"))


def _a_order(r: _Runner, p: _Params):
    t = r.table(p.take("table"))
    r.check(f"order of {t.identifier}", t.order, p.take("expect"))


def _a_order_factorization(r: _Runner, p: _Params):
    n = r.table(p.take("table")).order if p.has("table") else p.take("of")
    r.check("factorization", _factorization_string(n), p.take("expect"))


def _a_degree_times_order(r: _Runner, p: _Params):
    chi = r.charlist(p.take("char"))[0]
    t = r.table(p.take("table"))
    got = chi.degree.int_value() * t.order
    r.check("degree * order", got, p.take("expect"))


def _a_valid(r: _Runner, p: _Params):
    t = r.table(p.take("table"))
    bad = validate_table(t)
    for line in bad:
        r.note(f"    {line}")
    r.check(f"valid {t.identifier}", not bad, True)


def _a_equivalent(r: _Runner, p: _Params):
    a = r.table(p.take("a"))
    b = r.table(p.take("b"))
    perm = transforming_permutations(a, b)
    want = p.take("expect", True)
    r.check(f"equivalent {a.identifier} ~ {b.identifier}",
            perm is not None, want)


def _a_norms_one(r: _Runner, p: _Params):
    t = r.table(p.take("in"))
    chars = r.charlist(p.take("chars"))
    got = all(classfun.norm(t, chi) == 1 for chi in chars)
    r.check("all norms 1", got, True)


def _a_sylow(r: _Runner, p: _Params):
    order = r.table(p.take("table")).order if p.has("table") else p.take("order")
    q = p.take("p")
    index = p.take("index")
    pool = [p.take("pool-factor", 1) * d
            for d in sympy.divisors(p.take("pool-divisors-of"))]
    got = headbuilder.sylow_normalizer_orders(order, q, index, pool)
    r.check(f"sylow normalizer orders p={q}", got, p.take("expect"))


def _a_divisors_congruent(r: _Runner, p: _Params):
    got = headbuilder.divisors_congruent(p.take("n"), p.take("q"))
    r.check("divisors congruent 1", got, p.take("expect"))


def _ct_or_head(r: _Runner, p: _Params):
    obj = r.lookup(p.take("table"))
    if not isinstance(obj, (CharacterTable, headbuilder.TableHead)):
        raise StepFailure("  error: table= names neither a table nor a head")
    return obj


def _a_positions_of_order(r: _Runner, p: _Params):
    t = _ct_or_head(r, p)
    n = p.take("order")
    got = _pos1([i for i, o in enumerate(t.orders) if o == n])
    r.check(f"classes of order {n} in {t.identifier}", got, p.take("expect"))


def _a_count_of_order(r: _Runner, p: _Params):
    t = _ct_or_head(r, p)
    n = p.take("order")
    got = sum(1 for o in t.orders if o == n)
    r.check(f"number of order-{n} classes in {t.identifier}", got,
            p.take("expect"))


def _a_orders_at(r: _Runner, p: _Params):
    t = _ct_or_head(r, p)
    got = [t.orders[i - 1] for i in p.take("at")]
    r.check("element orders", got, p.take("expect"))


def _a_centralizers_at(r: _Runner, p: _Params):
    t = _ct_or_head(r, p)
    got = [encode_int(t.centralizers[i - 1]) for i in p.take("at")]
    r.check("centralizer orders", got, p.take("expect"))


def _a_sizes_at(r: _Runner, p: _Params):
    t = _ct_or_head(r, p)
    sizes = t.class_sizes()
    got = [encode_int(sizes[i - 1]) for i in p.take("at")]
    r.check("class sizes", got, p.take("expect"))


def _a_positions_of_size(r: _Runner, p: _Params):
    t = _ct_or_head(r, p)
    sizes = t.class_sizes()
    got = _pos1([i for i, s in enumerate(sizes) if s == p.take("size")])
    r.check("classes of that size", got, p.take("expect"))


def _a_values_at(r: _Runner, p: _Params):
    vals = r.values(p.take("of"))
    got = _values_out([vals[i - 1] for i in p.take("at")])
    r.check("values", got, p.take("expect"))


def _a_known_count(r: _Runner, p: _Params):
    vals = r.values(p.take("of"))
    got = sum(1 for v in vals if v is not None)
    r.check("known values", got, p.take("expect"))


def _a_missing(r: _Runner, p: _Params):
    vals = r.values(p.take("of"))
    got = _pos1([i for i, v in enumerate(vals) if v is None])
    r.check("missing values", got, p.take("expect"))


def _a_degrees(r: _Runner, p: _Params):
    t = r.table(p.take("in"))
    maxdeg = p.take("max")
    got = [chi.degree.int_value() for chi in t.irreducibles
           if chi.degree.int_value() <= maxdeg]
    r.check(f"degrees <= {maxdeg} in {t.identifier}", got, p.take("expect"))


def _a_value_matrix(r: _Runner, p: _Params):
    t = r.table(p.take("in"))
    maxdeg = p.take("max-degree")
    cols = [i - 1 for i in p.take("at")]
    cand = [chi for chi in t.irreducibles
            if chi.degree.int_value() <= maxdeg]
    got = [[_value_out(chi[j]) for j in cols] for chi in cand]
    r.check("candidate value matrix", got, p.take("expect"))


def _a_centre(r: _Runner, p: _Params):
    t = r.table(p.take("table"))
    got = _pos1(centre_classes(t))
    r.check(f"centre of {t.identifier}", got, p.take("expect"))


def _a_pcore(r: _Runner, p: _Params):
    t = r.table(p.take("table"))
    q = p.take("p")
    got = _pos1(pcore_classes(t, q))
    r.check(f"{q}-core of {t.identifier}", got, p.take("expect"))


def _a_normal_subgroups_of_order(r: _Runner, p: _Params):
    t = r.table(p.take("table"))
    want_order = p.take("order")
    sizes = t.class_sizes()
    got = [_pos1(cls) for cls in normal_subgroups(t)
           if sum(sizes[i] for i in cls) == want_order]
    r.check(f"normal subgroups of order {want_order}", got, p.take("expect"))


def _a_map_values(r: _Runner, p: _Params):
    pm = r.paramap(p.take("map"))
    enc = encode_map(pm)
    got = [enc[i - 1] for i in p.take("at")]
    r.check("map entries", got, p.take("expect"))


def _a_map_position(r: _Runner, p: _Params):
    pm = r.paramap(p.take("map"))
    val = p.take("value") - 1
    got = next((i + 1 for i, e in enumerate(pm) if e == val), None)
    r.check(f"first preimage of class {val + 1}", got, p.take("expect"))


def _a_stored_fusion(r: _Runner, p: _Params):
    sub = r.table(p.take("from"))
    amb = r.table(p.take("into"))
    pm = sub.fusion_into(amb)
    if pm is None:
        raise StepFailure(
            f"  error: no stored fusion from {sub.identifier} into "
            f"{amb.identifier}")
    if p.has("at"):
        enc = encode_map(pm)
        got = [enc[i - 1] for i in p.take("at")]
    else:
        got = encode_map(pm)
    r.check(f"stored fusion {sub.identifier} -> {amb.identifier}",
            got, p.take("expect"))


def _a_indeterminateness(r: _Runner, p: _Params):
    pm = r.paramap(p.take("map"))
    r.check("indeterminateness", fusion.indeterminateness(pm),
            p.take("expect"))


def _a_powermap_entry(r: _Runner, p: _Params):
    maps = r.lookup(p.take("maps"))
    q = p.take("p")
    enc = encode_map(maps[q])
    got = [enc[i - 1] for i in p.take("at")]
    r.check(f"power map p={q} entries", got, p.take("expect"))


def _a_powermap_open(r: _Runner, p: _Params):
    maps = r.lookup(p.take("maps"))
    q = p.take("p")
    open0 = fusion.indeterminate_positions(maps[q])
    r.check(f"open classes in the {q}-th power map", _pos1(open0),
            p.take("expect"))
    if p.has("expect-orders"):
        t = r.table(p.take("table"))
        r.check("their element orders", [t.orders[i] for i in open0],
                p.take("expect-orders"))


def _a_powermap_indeterminateness(r: _Runner, p: _Params):
    maps = r.lookup(p.take("maps"))
    got = [[q, fusion.indeterminateness(maps[q])] for q in sorted(maps)
           if fusion.indeterminateness(maps[q]) != 1]
    r.check("nontrivial power map indeterminateness", got, p.take("expect"))


def _a_table_power(r: _Runner, p: _Params):
    t = r.table(p.take("table"))
    pm = power_map(t, p.take("p"))
    got = [pm[i - 1] + 1 for i in p.take("at")]
    r.check("power map images", got, p.take("expect"))


def _a_fusion_of_power(r: _Runner, p: _Params):
    sub = r.table(p.take("table"))
    pm = power_map(sub, p.take("p"))
    fus = r.paramap(p.take("map"))
    enc = encode_map(fus)
    got = enc[pm[p.take("class") - 1]]
    r.check("fusion image of the power", got, p.take("expect"))


def _a_rational_class(r: _Runner, p: _Params):
    t = r.table(p.take("table"))
    i = p.take("class") - 1
    got = all(chi[i].n == 1 for chi in t.irreducibles)
    r.check(f"class {i + 1} of {t.identifier} rational", got,
            p.take("expect"))


def _a_field_sqrt(r: _Runner, p: _Params):
    t = r.table(p.take("table"))
    i = p.take("class") - 1
    d = p.take("d")
    got = field_contains_sqrt([chi[i] for chi in t.irreducibles], d)
    r.check(f"values at class {i + 1} span sqrt({d})", got, p.take("expect"))


def _a_automorphism(r: _Runner, p: _Params):
    t = r.table(p.take("table"))
    perm = list(range(t.nclasses))
    for cyc_ in p.take("perm"):
        zero = [i - 1 for i in cyc_]
        for a, b in zip(zero, zero[1:] + zero[:1]):
            perm[a] = b
    got = permutation_is_table_automorphism(t, perm)
    r.check("table automorphism", got, p.take("expect"))


def _a_class_equation(r: _Runner, p: _Params):
    head = r.lookup(p.take("head"))
    got = sum(head.class_sizes()) == head.order
    r.check("class equation", got, True)


def _a_heads_match(r: _Runner, p: _Params):
    a = r._head(p.take("a"))
    b = r._head(p.take("b"))
    r.check("same class data", (a.orders, a.centralizers)
            == (b.orders, b.centralizers), True)
    r.check("fusion record count", [len(a.fusions), len(b.fusions)],
            p.take("expect-fusions"))
    for k in p.take("expect-equal-records"):
        ra, rb = a.fusions[k - 1], b.fusions[k - 1]
        same = ra.sub.identifier == rb.sub.identifier and ra.map == rb.map
        r.check(f"record {k} equal", same, True)
    for k in p.take("expect-equal-maps", []):
        ra, rb = a.fusions[k - 1], b.fusions[k - 1]
        r.check(f"record {k} maps equal", ra.map == rb.map, True)


_ASSERTS = {
    "equal": _a_equal,
    "length": _a_length,
    "class-count": _a_class_count,
    "order": _a_order,
    "order-factorization": _a_order_factorization,
    "degree-times-order": _a_degree_times_order,
    "valid": _a_valid,
    "equivalent": _a_equivalent,
    "norms-one": _a_norms_one,
    "sylow": _a_sylow,
    "divisors-congruent": _a_divisors_congruent,
    "positions-of-order": _a_positions_of_order,
    "count-of-order": _a_count_of_order,
    "orders-at": _a_orders_at,
    "centralizers-at": _a_centralizers_at,
    "sizes-at": _a_sizes_at,
    "positions-of-size": _a_positions_of_size,
    "values-at": _a_values_at,
    "known-count": _a_known_count,
    "missing": _a_missing,
    "degrees": _a_degrees,
    "value-matrix": _a_value_matrix,
    "centre": _a_centre,
    "pcore": _a_pcore,
    "normal-subgroups-of-order": _a_normal_subgroups_of_order,
    "map-values": _a_map_values,
    "map-position": _a_map_position,
    "stored-fusion": _a_stored_fusion,
    "indeterminateness": _a_indeterminateness,
    "powermap-entry": _a_powermap_entry,
    "powermap-open": _a_powermap_open,
    "powermap-indeterminateness": _a_powermap_indeterminateness,
    "table-power": _a_table_power,
    "fusion-of-power": _a_fusion_of_power,
    "rational-class": _a_rational_class,
    "field-sqrt": _a_field_sqrt,
    "automorphism": _a_automorphism,
    "class-equation": _a_class_equation,
    "heads-match": _a_heads_match,
}


# -- entry points ----------------------------------------------------------------


def run_script_text(text: str, data_dir=None) -> Report:
    steps = parse_script(text)
    return _Runner(steps, data_dir).run()


def run_script(script_path, data_dir=None) -> Report:
    path = Path(script_path)
    report = run_script_text(path.read_text(), data_dir)
    report.lines.insert(0, f"script {path.name}")
    return report
