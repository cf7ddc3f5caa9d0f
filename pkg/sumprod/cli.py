"""Command-line front end: set specs in, CSV/JSON reports out.

Exit status is 0 when every ASSERT row holds, 1 when one fails and 2 on invalid input.
"""

from __future__ import annotations

import logging
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import click
import numpy as np

from . import __version__, decompose, energy, expsum, incidence, oracle, reports, sl2, storage, suites
from .config import SumprodConfig, get_config, load_env, set_config
from .errors import DomainError
from .fpcore import FieldCtx, SetFp, gen_set, make_field, mul_char, parse_set_spec
from .reports import Report
from .transform import as_intfn, balanced

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


@dataclass
class RunConfig:
    command: str = ""
    params: Dict[str, Any] = field(default_factory=dict)
    fmt: str = "csv"
    out: Optional[str] = None
    threads: int = 1
    oracle: bool = False
    timestamp: bool = True

    def metadata(self) -> dict:
        meta = {"config": asdict(self), "version": __version__, "prng": suites.PRNG}
        if self.timestamp:
            meta["created_at"] = datetime.now(timezone.utc).isoformat()
        return meta


class SumprodGroup(click.Group):
    """Maps ValueError from the library to exit status 2."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except ValueError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(2)


# -- input parsing -----------------------------------------------------------------


def load_set(text: str, p: Optional[int] = None) -> SetFp:
    """A set spec; a bare kind such as ``full`` takes p from ``--p``."""
    if ":" not in text:
        if p is None:
            raise DomainError(f"set {text!r} needs --p")
        text = f"{text}:p={p}"
    elif p is not None and "p=" not in text:
        text = f"{text},p={p}"
    return gen_set(parse_set_spec(text))


def parse_poly_option(text: str) -> tuple[int, ...]:
    """``"1,0,1"`` is 1 + x^2."""
    try:
        return tuple(int(c) for c in text.split(",") if c.strip())
    except ValueError as exc:
        raise DomainError(f"malformed polynomial {text!r}: expected comma-separated integers") from exc


def parse_rational_option(text: Optional[str]):
    """``"0,1/1"`` is x / 1."""
    if text is None:
        return None
    num, sep, den = text.partition("/")
    return parse_poly_option(num), parse_poly_option(den if sep else "1")


def _same_field(*sets: SetFp) -> FieldCtx:
    if len({s.p for s in sets}) != 1:
        raise DomainError("all sets must live over the same field")
    return sets[0].field


# -- reporting -----------------------------------------------------------------------


def _run(ctx: click.Context) -> RunConfig:
    run: RunConfig = ctx.obj
    run.command = ctx.command_path.split(" ", 1)[-1]
    run.params = {key: value for key, value in ctx.params.items() if value is not None}
    return run


def _finish(ctx: click.Context, rows: Sequence[reports.BoundReport]) -> None:
    run = _run(ctx)
    report = Report(metadata=run.metadata(), rows=list(rows))
    if run.out:
        path = storage.write_report(report, get_config().report_path(run.out), run.fmt)
        click.echo(f"wrote {len(report.rows)} rows to {path}", err=True)
    else:
        click.echo(storage.render_report(report, run.fmt), nl=False)
    for row in report.failed:
        logger.warning("ASSERT failed: %s %s (lhs=%s rhs=%s)", row.suite, row.claim_ref, row.lhs, row.rhs)
    ctx.exit(report.exit_code)


def _value_row(suite: str, claim: str, value, main=None, note: str = "") -> reports.BoundReport:
    return reports.ratio_row(suite, claim, value, None, main_term=main, note=note)


def _oracle_rows(ctx: click.Context, name: str, fast, *args) -> List[reports.BoundReport]:
    if not ctx.obj.oracle:
        return []
    return [reports.assert_eq("oracle", f"oracle {name}", fast, oracle.brute(name, *args))]


set_option = click.option("--set", "set_a", required=True, help="Set spec, e.g. subgroup:p=13,t=3.")
p_option = click.option("--p", "p", type=int, default=None, help="Prime for bare set kinds such as 'full'.")


# -- root group ----------------------------------------------------------------------


@click.group(cls=SumprodGroup)
@click.version_option(__version__, prog_name="sumprod")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the report here instead of stdout.")
@click.option("--format", "fmt", type=click.Choice(storage.FORMATS), default="csv", show_default=True)
@click.option("--threads", type=int, default=None, help="Worker threads (default SUMPROD_THREADS).")
@click.option("--log-level", default=None, help="Logging level (default SUMPROD_LOG_LEVEL).")
@click.option("--no-timestamp", is_flag=True, help="Leave the timestamp out of the report metadata.")
@click.option("--oracle", "use_oracle", is_flag=True, help="Cross-check quantities against brute force.")
@click.pass_context
def cli(ctx: click.Context, out, fmt, threads, log_level, no_timestamp, use_oracle) -> None:
    """Sum-product quantities over prime fields and checks of their bounds."""
    load_env()
    if threads is not None and threads < 1:
        raise click.BadParameter("must be at least 1", param_hint="--threads")
    config = SumprodConfig.from_env().with_overrides(threads=threads, log_level=log_level and log_level.upper())
    set_config(config)
    logging.basicConfig(level=getattr(logging, config.log_level, logging.WARNING), format=LOG_FORMAT, stream=sys.stderr)
    ctx.obj = RunConfig(fmt=fmt, out=out, threads=config.threads, oracle=use_oracle, timestamp=not no_timestamp)


# -- energies ------------------------------------------------------------------------


@cli.command("energy")
@set_option
@click.option("--set-b", default=None)
@click.option("--op", type=click.Choice(["+", "x"]), default="+", show_default=True)
@click.option("--checks", is_flag=True, help="Append the constant-free inequality bundle.")
@click.pass_context
def energy_cmd(ctx, set_a, set_b, op, checks) -> None:
    """E+(A,B) or Ex(A,B)."""
    A = load_set(set_a)
    B = load_set(set_b) if set_b else A
    _same_field(A, B)
    value = energy.energy(op, A, B)
    main = Fraction(len(A) ** 2 * len(B) ** 2, A.p)
    rows = [_value_row("energy", f"E{op}(A,B)", value, main)]
    rows += _oracle_rows(ctx, "E+" if op == "+" else "Ex", value, A, B)
    if checks:
        rows += energy.crude_checks(A, B)
    _finish(ctx, rows)


@cli.command("tk")
@set_option
@click.option("--k", type=int, required=True)
@click.pass_context
def tk_cmd(ctx, set_a, k) -> None:
    """T+_k(A) with main term |A|^2k / p."""
    A = load_set(set_a)
    value = energy.tk(A, k)
    rows = [_value_row("energy", f"T+_{k}", value, Fraction(len(A) ** (2 * k), A.p))]
    _finish(ctx, rows + _oracle_rows(ctx, "T+_k", value, A, k))


@cli.command("ek")
@set_option
@click.option("--k", type=int, required=True)
@click.pass_context
def ek_cmd(ctx, set_a, k) -> None:
    """E+_k(A) with main term |A|^2k / p^(k-1)."""
    A = load_set(set_a)
    value = energy.energy_k(A, k)
    rows = [_value_row("energy", f"E+_{k}", value, Fraction(len(A) ** (2 * k), A.p ** (k - 1)))]
    _finish(ctx, rows + _oracle_rows(ctx, "E+_k", value, A, k))


@cli.command("dtimes")
@set_option
@click.option("--k", type=int, default=2, show_default=True)
@click.option("--exclude-zero", is_flag=True, help="Drop tuples whose product vanishes.")
@click.pass_context
def dtimes_cmd(ctx, set_a, k, exclude_zero) -> None:
    """Dx_k(A), collisions of products of k differences."""
    A = load_set(set_a)
    value = energy.dtimes_k(A, k, "exclude" if exclude_zero else "track")
    rows = [_value_row("energy", f"Dx_{k}", value, Fraction(len(A) ** (4 * k), A.p))]
    if not exclude_zero:
        rows += energy.dtimes_bound_ratio(A, k)
        rows += _oracle_rows(ctx, "Dx_k", value, A, k)
    _finish(ctx, rows)


@cli.command("dprime")
@set_option
@click.option("--k", type=int, default=2, show_default=True)
@click.pass_context
def dprime_cmd(ctx, set_a, k) -> None:
    """D'_k(A) = T+_k(r_AA)."""
    A = load_set(set_a)
    value = energy.dprime_k(A, k)
    rows = [_value_row("energy", f"D'_{k}", value, Fraction(len(A) ** (4 * k), A.p))]
    _finish(ctx, rows + _oracle_rows(ctx, "D'_k", value, A, k))


@cli.command("nq")
@set_option
@click.option("--set-b", default=None)
@click.option("--set-c", default=None)
@click.option("--prime", "prime", is_flag=True, help="N'(A) = #{a1 a2 + a3 = a1' a2' + a3'} instead.")
@click.pass_context
def nq_cmd(ctx, set_a, set_b, set_c, prime) -> None:
    """N(A,B,C) = #{a(b-c) = a'(b'-c')}."""
    A = load_set(set_a)
    if prime:
        value = energy.nprime(A)
        _finish(ctx, [energy.nprime_bound_ratio(A)] + _oracle_rows(ctx, "N'", value, A))
        return
    B = load_set(set_b) if set_b else A
    C = load_set(set_c) if set_c else A
    _same_field(A, B, C)
    value = energy.n_quantity(A, B, C)
    main = Fraction((len(A) * len(B) * len(C)) ** 2, A.p)
    rows = [_value_row("energy", "N(A,B,C)", value, main)]
    if set_b and not set_c:
        rows.append(energy.n_bound_ratio(B, A))
    _finish(ctx, rows + _oracle_rows(ctx, "N", value, A, B, C))


# -- incidences ----------------------------------------------------------------------


@cli.command("collinear")
@set_option
@click.pass_context
def collinear_cmd(ctx, set_a) -> None:
    """T(A), collinear triples in A x A."""
    A = load_set(set_a)
    rows = incidence.triples_report(A)
    _finish(ctx, rows + _oracle_rows(ctx, "T", rows[0].rhs, A))


@cli.command("quadruples")
@set_option
@click.option("--table", is_flag=True, help="Also report the q-function decomposition.")
@click.pass_context
def quadruples_cmd(ctx, set_a, table) -> None:
    """Q(A), collinear quadruples in A x A."""
    A = load_set(set_a)
    rows = incidence.quadruples_report(A)
    if table:
        q = incidence.q_function(A)
        rows.append(
            reports.assert_eq(
                "tq", "f:Q_E_3 (sum q^2 + degenerate = Q)", q.total, rows[0].lhs,
                note=f"bucket={q.bucket} degenerate={q.degenerate}",
            )
        )
    _finish(ctx, rows + _oracle_rows(ctx, "Q", rows[0].lhs, A))


@cli.command("incidence")
@set_option
@click.option("--set-b", default=None)
@click.option("--set-c", default=None)
@click.option("--planes", type=int, default=0, help="Random planes against the grid A x B x C.")
@click.option("--lines", type=int, default=0, help="Random lines against the grid A x B.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
def incidence_cmd(ctx, set_a, set_b, set_c, planes, lines, seed) -> None:
    """Point-plane and point-line incidence counts."""
    A = load_set(set_a)
    B = load_set(set_b) if set_b else A
    C = load_set(set_c) if set_c else A
    fld = _same_field(A, B, C)
    rng = np.random.Generator(np.random.PCG64(seed))
    rows = []
    if planes:
        pts = incidence.PointSet3.of(fld, ((a, b, c) for a in A for b in B for c in C))
        raw = rng.integers(0, fld.p, size=(planes, 4))
        raw[~raw[:, :3].any(axis=1), 0] = 1
        rows += incidence.point_plane_report(pts, incidence.PlaneSet.of(fld, raw.tolist()))
    if lines:
        rows.append(incidence.point_line_incidences(A, B, incidence.LineSet.random(fld, lines, rng)))
    if not rows:
        raise DomainError("nothing to count: pass --planes and/or --lines")
    _finish(ctx, rows)


@cli.command("design")
@click.option("--q", type=int, required=True)
@click.option("--trials", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
def design_cmd(ctx, q, trials, seed) -> None:
    """Design-matrix Gram identity and the incidence bound on random mean-zero weights."""
    n = len(incidence.projective_points(q))
    rng = np.random.Generator(np.random.PCG64(seed))
    rows = []
    for trial in range(trials):
        alpha = rng.standard_normal(n)
        alpha -= alpha.mean()
        rows += incidence.design_bound_check(q, alpha, rng.standard_normal(n), check_matrix=trial == 0)
    _finish(ctx, rows)


# -- exponential sums ----------------------------------------------------------------


@cli.command("expsum")
@click.argument("kind", type=click.Choice(["tri", "bilinear", "multi", "special", "ps"]))
@click.option("--X", "x_spec", default=None)
@click.option("--Y", "y_spec", default=None)
@click.option("--Z", "z_spec", default=None)
@click.option("--W", "w_spec", default=None)
@click.option("--V", "v_spec", default=None)
@p_option
@click.option("--special", "special_kind", type=click.Choice(expsum.SPECIAL_KINDS), default="inv-shift-e", show_default=True)
@click.option("--f", "f_spec", default=None, help="Set whose indicator is f (special sums).")
@click.option("--g", "g_spec", default=None, help="Set whose indicator is g (special sums).")
@click.option("--B", "b_spec", default=None)
@click.option("--balanced", "use_balanced", is_flag=True, help="Use the balanced function of f.")
@click.option("--char-order", type=int, default=2, show_default=True)
@click.option("--r1", default=None, help="Rational r1 as 'num coeffs/den coeffs', e.g. 0,1/1.")
@click.option("--r2", default=None)
@click.option("--delta", type=float, default=None)
@click.pass_context
def expsum_cmd(ctx, kind, x_spec, y_spec, z_spec, w_spec, v_spec, p, special_kind, f_spec, g_spec, b_spec,
               use_balanced, char_order, r1, r2, delta) -> None:
    """Trilinear, bilinear-weighted, multilinear and special exponential sums."""
    if kind == "special":
        if not (f_spec and g_spec and b_spec):
            raise DomainError("special sums need --f, --g and --B")
        F, G, B = load_set(f_spec, p), load_set(g_spec, p), load_set(b_spec, p)
        fld = _same_field(F, G, B)
        f = balanced(F) if use_balanced else as_intfn(F)
        chi = mul_char(fld, char_order) if special_kind.endswith("chi") else None
        result = expsum.special_sums(special_kind, f, G, B, char=chi,
                                     r1=parse_rational_option(r1), r2=parse_rational_option(r2))
        _finish(ctx, [expsum.special_sums_report(result, f, G, B, delta)])
        return

    specs = [s for s in (x_spec, y_spec, z_spec, w_spec, v_spec) if s]
    if len(specs) < 3:
        raise DomainError(f"expsum {kind} needs --X, --Y and --Z")
    sets = [load_set(s, p) for s in specs]
    _same_field(*sets)
    if kind == "ps":
        _finish(ctx, expsum.ps_new_ratio(*sets[:3]))
        return
    if kind == "tri":
        result = expsum.trilinear_sum(*sets[:3])
    elif kind == "bilinear":
        result = expsum.trilinear_bilinear_sum(*sets[:3])
    else:
        result = expsum.multilinear_sum(*sets)
    r = 3 if kind != "multi" else len(sets)
    size_delta = expsum.product_delta(*sets[: r])
    note = f"value={reports.format_value(result.value)} terms={result.term_count}"
    if size_delta > 0:
        spec = expsum.bound_exponent(size_delta, r, "three-set" if r == 3 else "four-set")
        rhs = result.term_count * sets[0].p ** (-spec.exponent)
        note += f" delta={size_delta:.6g} exponent={spec.exponent:.6g}"
    else:
        rhs = result.term_count
    claim = "f:etropy_exp_intr" if r == 3 else "f:etropy_exp_2"
    _finish(ctx, [reports.ratio_row("multilinear", claim, abs(result.value), rhs, note=note)])


@cli.command("bound-exp")
@click.option("--delta", type=float, required=True)
@click.option("--r", type=int, default=3, show_default=True)
@click.option("--variant", type=click.Choice(expsum.VARIANTS), default="three-set", show_default=True)
@click.pass_context
def bound_exp_cmd(ctx, delta, r, variant) -> None:
    """Explicit saving exponent for multilinear sums."""
    spec = expsum.bound_exponent(delta, r, variant)
    note = f"variant={variant}" + (f" k={spec.k}" if spec.k is not None else "")
    _finish(ctx, [_value_row("multilinear", f"exponent delta={delta:g} r={r}", spec.exponent, note=note)])


# -- SL2 -------------------------------------------------------------------------------


@cli.group("sl2", cls=SumprodGroup)
def sl2_group() -> None:
    """SL2(F_p) action statistics."""


@sl2_group.command("flatten")
@click.option("--p", type=int, required=True)
@click.option("--measure", type=click.Choice(["random", "haar", "delta"]), default="random", show_default=True)
@click.option("--n", type=int, default=2, show_default=True, help="Random generators before symmetrising.")
@click.option("--k-max", type=int, default=4, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
def sl2_flatten(ctx, p, measure, n, k_max, seed) -> None:
    """Exact L2-flattening profile of a symmetric measure."""
    fld = make_field(p)
    if measure == "haar":
        mu = sl2.haar(fld)
    elif measure == "delta":
        mu = sl2.delta(p)
    else:
        mu = sl2.random_symmetric_measure(fld, n, seed)
    profile = sl2.flatten_profile(mu, k_max)
    rows = sl2.flatten_rows(profile, p)
    if ctx.obj.oracle:
        weights = {g.as_tuple(): w for g, w in mu.weights.items()}
        rows.append(reports.assert_eq("oracle", "oracle flatten", profile, oracle.brute("flatten", weights, p, k_max)))
    _finish(ctx, rows)


@sl2_group.command("tripling")
@click.option("--p", type=int, required=True)
@click.option("--n", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
def sl2_tripling(ctx, p, n, seed) -> None:
    """|AAA| for a random symmetric set A."""
    mu = sl2.random_symmetric_measure(make_field(p), n, seed)
    _finish(ctx, [sl2.tripling(mu.support())])


@sl2_group.command("cf")
@set_option
@click.option("--k", type=int, required=True)
@click.pass_context
def sl2_cf(ctx, set_a, k) -> None:
    """Distribution of continued fractions [a1, ..., ak] over P^1."""
    A = load_set(set_a)
    result = sl2.cf_count(A, k)
    _finish(ctx, result.rows + _oracle_rows(ctx, "cf", list(result.value), A, k))


def _family_from(kind: str, specs: Sequence[str], r1: Optional[str], r2: Optional[str]) -> sl2.MatrixFamily:
    sets = [load_set(s) for s in specs]
    return sl2.family(kind, sets, parse_rational_option(r1), parse_rational_option(r2))


@sl2_group.command("count")
@click.option("--family", "kind", type=click.Choice(sl2.FAMILY_KINDS), default="S", show_default=True)
@click.option("--set", "sets", multiple=True, required=True, help="Family parameter sets, in order.")
@click.option("--f1", required=True, help="Set whose indicator is f1.")
@click.option("--f2", required=True, help="Set whose indicator is f2.")
@click.option("--r1", default=None)
@click.option("--r2", default=None)
@click.option("--depth", type=int, default=None, help="Flattening depth; measured when p <= 13.")
@click.pass_context
def sl2_count(ctx, kind, sets, f1, f2, r1, r2, depth) -> None:
    """sum_{s, a} f1(a) f2(s a) against its main term."""
    S = _family_from(kind, sets, r1, r2)
    result = sl2.action_count(S, load_set(f1), load_set(f2), depth=depth)
    _finish(ctx, result.rows)


@sl2_group.command("escape")
@click.option("--family", "kind", type=click.Choice(sl2.FAMILY_KINDS), default="S", show_default=True)
@click.option("--set", "sets", multiple=True, required=True)
@click.option("--r1", default=None)
@click.option("--r2", default=None)
@click.option("--trials", type=int, default=64, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
def sl2_escape(ctx, kind, sets, r1, r2, trials, seed) -> None:
    """Largest intersection of a matrix family with Borel and dihedral cosets."""
    S = _family_from(kind, sets, r1, r2)
    _finish(ctx, sl2.coset_escape(S, trials=trials, seed=seed))


@sl2_group.command("frobenius")
@click.option("--p", type=int, required=True)
@click.option("--mode", type=click.Choice(["inequality", "power-iteration"]), default="inequality", show_default=True)
@click.option("--trials", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
def sl2_frobenius(ctx, p, mode, trials, seed) -> None:
    """Frobenius-type bound on random mean-zero functions."""
    fld = make_field(p)
    params = suites.SuiteParams(p=p, seed=seed)
    rng = params.rng(p)
    rows = []
    for _ in range(trials):
        f = suites._mean_zero_fn(fld, rng)
        if mode == "inequality":
            F = sl2.random_symmetric_measure(fld, int(rng.integers(1, 6)), int(rng.integers(2**31)))
            rows += sl2.frobenius_check(F, f, suites._int_fn(fld, rng))
        else:
            rows += sl2.frobenius_check(None, f, mode=mode)
    _finish(ctx, rows)


# -- counting corollaries ----------------------------------------------------------------


@cli.command("inverse-diff")
@set_option
@click.option("--set-b", default=None, help="Second set A2 (default A).")
@click.option("--lam", type=int, default=1, show_default=True)
@click.option("--B", "b_spec", default=None, help="Shift set for the doubling-constant bound.")
@click.option("--depth", type=int, default=None)
@click.pass_context
def inverse_diff_cmd(ctx, set_a, set_b, lam, b_spec, depth) -> None:
    """#{(a1, a2) : 1/a1 - 1/a2 = lambda}."""
    A1 = load_set(set_a)
    A2 = load_set(set_b) if set_b else A1
    B = load_set(b_spec) if b_spec else None
    _same_field(A1, A2, *([B] if B is not None else []))
    result = sl2.inverse_diff_count(A1, A2, lam, B, depth)
    rows = [_value_row("cf", "1/a1 - 1/a2 = lambda", result.value, note=f"lambda={lam} zeros excluded={result.skipped}")]
    _finish(ctx, rows + result.rows + _oracle_rows(ctx, "inverse_diff", result.value, A1, A2, lam))


@cli.command("poly-shift")
@set_option
@click.option("--set-b", required=True)
@click.option("--p1", "p1_text", required=True, help="Coefficients lowest first, e.g. 0,1.")
@click.option("--p2", "p2_text", required=True)
@click.option("--depth", type=int, default=None)
@click.pass_context
def poly_shift_cmd(ctx, set_a, set_b, p1_text, p2_text, depth) -> None:
    """Collisions and image of (a, b) -> p1(b) + 1/(a + p2(b))."""
    A, B = load_set(set_a), load_set(set_b)
    _same_field(A, B)
    p1, p2 = parse_poly_option(p1_text), parse_poly_option(p2_text)
    result = sl2.poly_shift_count(A, B, p1, p2, depth)
    _finish(ctx, result.rows + _oracle_rows(ctx, "poly_shift", result.value, A, B, p1, p2))


@cli.command("gl2-image")
@set_option
@click.option("--b1", required=True)
@click.option("--b2", required=True)
@click.option("--b3", required=True)
@click.option("--no-escape", is_flag=True)
@click.pass_context
def gl2_image_cmd(ctx, set_a, b1, b2, b3, no_escape) -> None:
    """Image of A under a -> (a + b1)/(a b2 + b3)."""
    A, B1, B2, B3 = (load_set(s) for s in (set_a, b1, b2, b3))
    _same_field(A, B1, B2, B3)
    result = sl2.gl2_image(A, B1, B2, B3, escape=not no_escape)
    rows = result.rows + _oracle_rows(ctx, "gl2_image", result.size, A, B1, B2, B3)
    _finish(ctx, rows)


# -- decomposition ---------------------------------------------------------------------


@cli.command("decompose")
@set_option
@click.option("--m", "M", type=str, required=True, help="Parameter M, an integer or a fraction such as 5/2.")
@click.option("--x", "x_spec", default=None, help="Set X for the multiplicative bound on C (default A).")
@click.pass_context
def decompose_cmd(ctx, set_a, M, x_spec) -> None:
    """Split A into an additively unstructured B and a multiplicatively small C."""
    A = load_set(set_a)
    X = load_set(x_spec) if x_spec else A
    _same_field(A, X)
    try:
        m = Fraction(M)
    except ValueError as exc:
        raise DomainError(f"M must be a rational number, got {M!r}") from exc
    B, C, cert = decompose.bw_decompose(A, m)
    rows = [
        _value_row("decompose", "|B|", len(B), note=f"iterations={len(cert.iterations)}"),
        _value_row("decompose", "|C|", len(C)),
    ]
    _finish(ctx, rows + decompose.verify_bw(cert, X))


# -- verification suites -----------------------------------------------------------------


@cli.command("verify")
@click.argument("suite", type=click.Choice(suites.suite_names()))
@click.option("--p", type=int, default=None, help="Restrict the suite to one prime.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--small", is_flag=True, help="Desk-check scale.")
@click.pass_context
def verify_cmd(ctx, suite, p, seed, small) -> None:
    """Run a verification suite."""
    report = suites.run_suite(suite, p=p, seed=seed, small=small)
    _finish(ctx, report.rows)


def main(argv: Optional[Sequence[str]] = None) -> None:
    cli.main(args=list(argv) if argv is not None else None, prog_name="sumprod")
