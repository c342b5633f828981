# Path: verifier/checks.py
"""verifier.checks
==================
Check catalog: every CLI command expands to an ordered list of :class:`Check`
objects. A check is a zero-argument callable returning an :class:`Outcome`;
the runner decides pass/fail against the check's tolerance (or the run's
``--tol``) and never asserts report-only rows.

Catalogs are looked up by name, ``_checks_<command>`` with dashes mapped to
underscores.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from jacobi import fredholm, ladder, moments, orthopoly, painleve, struct_mat
from jacobi.moments import WeightParams
from jacobi.painleve import HamiltonianCase
from jacobi.struct_mat import SymbolCase
from shared.errors import UsageError
from shared.precision import PrecisionContext
from shared.utils import Gap, central_diff, worst
from verifier.config import RunConfig

logger = logging.getLogger(__name__)

CROSS_ROUTE_TOL = 1e-10
ODE_ROUTE_TOL = 1e-7
CLOSED_FORM_TOL = 1e-20
PAINLEVE_TOL = 1e-5
INITIAL_TOL = 1e-4
RECONSTRUCT_TOL = 1e-6
TREND_TOL = 1e-4
PHI_TOL = 1e-6

TRANSFORM_SEEDS = 20
TRANSFORM_TRUNC = 12
Z_SAMPLES = ("0.3", "-0.45", "0.77", "2.5")


@dataclass
class Outcome:
    value: Any = None
    gap: Optional[Gap] = None
    residual: Any = None  # used when there is no lhs/rhs pair
    note: str = ""

    @property
    def relative(self) -> Any:
        return self.gap.relative if self.gap is not None else self.residual


@dataclass(frozen=True)
class Check:
    name: str
    ref: str
    compute: Callable[[], Outcome]
    asserted: bool = True
    tolerance: Optional[float] = None


def weight_params(config: RunConfig) -> WeightParams:
    return WeightParams(float(config.alpha), float(config.beta), float(config.t))


def _gap(g: Gap, value: Any = None, note: str = "") -> Outcome:
    return Outcome(value=value, gap=g, note=note)


class CheckCatalog:
    """Builds the check list of one run."""

    def __init__(self, config: RunConfig) -> None:
        self.config = config
        self.pc = PrecisionContext.from_digits(config.digits)
        self.params = weight_params(config)
        self._memo: Dict[str, Any] = {}
        self._lock = threading.RLock()

    def memo(self, key: str, compute: Callable[[], Any]) -> Any:
        """Compute a value shared by several checks once; workers wait on the lock."""
        with self._lock:
            if key not in self._memo:
                self._memo[key] = compute()
            return self._memo[key]

    def checks(self) -> List[Check]:
        name = f"_checks_{self.config.command.replace('-', '_')}"
        builder = getattr(self, name, None)
        if builder is None:
            raise UsageError(f"no checks for command {self.config.command!r}")
        out = list(builder())
        logger.debug(f"[CATALOG] command={self.config.command} checks={len(out)}")
        return out

    # ------------------------------------------------------------------
    # moments
    # ------------------------------------------------------------------

    def _checks_moments(self) -> Iterable[Check]:
        p, pc, n = self.params, self.pc, max(self.config.n, 1)
        yield Check("mu_0", "moment mu_0 (Kummer form)", lambda: Outcome(value=moments.mu0(p, pc)), asserted=False)
        yield Check("D_n", "Hankel determinant D_n(t)", lambda: self._positive(moments.hankel_det(p, n, pc)))
        for k in range(min(2 * n, 8) + 1):
            yield Check(
                f"mu_{k} closed form vs quadrature",
                "moments as Kummer sums",
                lambda k=k: _gap(Gap(moments.mu_k(p, k, pc), moments.quad_moment(p, k, pc))),
            )
        for k in range(3):
            yield Check(
                f"d/dt mu_{k} = -mu_{k + 1}",
                "moment derivative rule",
                lambda k=k: _gap(
                    Gap(central_diff(lambda s: moments.mu_k(p.with_t(s), k, pc), p.t, pc), -moments.mu_k(p, k + 1, pc))
                ),
            )
        yield Check(
            "D_n(a,b,t) = D_n(b,a,-t)",
            "reflection x -> -x",
            lambda: _gap(Gap(moments.hankel_det(p, n, pc), moments.hankel_det(p.reflected(), n, pc))),
        )

    @staticmethod
    def _positive(value: Any) -> Outcome:
        return Outcome(value=value, residual=0 if value > 0 else 1, note="" if value > 0 else "not positive")

    # ------------------------------------------------------------------
    # recurrence coefficients
    # ------------------------------------------------------------------

    def _checks_recurrence(self) -> Iterable[Check]:
        p, pc, n_max = self.params, self.pc, self.config.n_max
        yield Check("h_n, beta_n > 0", "positivity of norms", lambda: self._table_positive(p, n_max))
        for n in range(n_max + 1):
            yield Check(
                f"t=0 closed forms n={n}",
                "pure Jacobi recurrence coefficients",
                lambda n=n: self._closed_forms(n),
                tolerance=CLOSED_FORM_TOL,
            )
        if p.t != 0:
            for n in range(1, n_max + 1):
                yield Check(
                    f"moments vs difference iteration n={n}",
                    "difference equations in n",
                    lambda n=n: self._cross_difference(n),
                    tolerance=CROSS_ROUTE_TOL,
                )
                yield Check(
                    f"Toda equations n={n}",
                    "Toda equations",
                    lambda n=n: self._toda(n),
                    tolerance=ODE_ROUTE_TOL,
                )
            yield Check(
                "Toda flow integration vs moments",
                "Toda equations",
                self._toda_flow,
                tolerance=ODE_ROUTE_TOL,
            )
        n = max(self.config.n, 1)
        yield Check(f"d/dt p1(n) = beta_n n={n}", "p1 derivative", lambda: _gap(orthopoly.p1_derivative_gap(p, n, p.t, pc)))
        yield Check(f"d/dt log D_n = p1(n) n={n}", "log-derivative of D_n", lambda: _gap(orthopoly.log_det_derivative_gap(p, n, p.t, pc)))
        yield Check(
            f"Toda molecule n={n}",
            "Toda molecule equation",
            lambda: _gap(worst(orthopoly.toda_molecule_residual(p, n, p.t, pc))),
            tolerance=PAINLEVE_TOL,
        )

    def _table_positive(self, p: WeightParams, n_max: int) -> Outcome:
        orthopoly.recurrence_from_moments(p, n_max, self.pc).check()
        return Outcome(residual=0)

    def _closed_forms(self, n: int) -> Outcome:
        zero = self.params.with_t(0)
        table = orthopoly.recurrence_from_moments(zero, max(n, 1), self.pc)
        forms = ladder.jacobi_closed_forms(zero, n, self.pc)
        r_n = (n - table.p1[n]) / 2
        gaps = [Gap(table.alpha_n[n], forms.alpha_n), Gap(table.beta_n[n], forms.beta_n), Gap(r_n, forms.r_n)]
        if zero.alpha > 0:
            r_q, R_q = ladder.aux_from_quadrature(zero, n, self.pc)
            gaps += [Gap(r_q, forms.r_n), Gap(R_q, forms.R_n)]
        return _gap(worst(gaps))

    def _cross_difference(self, n: int) -> Outcome:
        p, pc = self.params, self.pc
        table = orthopoly.recurrence_from_moments(p, max(n, 1), pc)
        aux_m = ladder.aux_from_recurrence(table, pc)
        aux_d = ladder.difference_iterate(p, n, pc)
        alpha_d, beta_d = ladder.recurrence_from_aux(aux_d, pc)
        gaps = [
            Gap(aux_m.r_n[n], aux_d.r_n[n]),
            Gap(aux_m.R_n[n], aux_d.R_n[n]),
            Gap(table.alpha_n[n], alpha_d[n]),
            Gap(table.beta_n[n], beta_d[n]),
        ]
        note = ""
        if p.alpha > 0:
            r_q, R_q = ladder.aux_from_quadrature(p, n, pc)
            gaps += [Gap(aux_m.r_n[n], r_q), Gap(aux_m.R_n[n], R_q)]
            note = "quadrature route included"
        return _gap(worst(gaps), value=aux_m.R_n[n], note=note)

    def _toda(self, n: int) -> Outcome:
        res_beta, res_alpha = orthopoly.toda_residual(self.params, n, self.params.t, self.pc)
        r, R = ladder.moment_route_aux(self.params, n, self.pc)
        r_i, R_i = ladder.integrate_riccati(self.params, n, self.params.t / 2, self.params.t, self.pc)
        riccati = worst([Gap(r, r_i), Gap(R, R_i)])
        return Outcome(residual=max(res_beta, res_alpha, riccati.relative), note="with Riccati integration")

    def _toda_flow(self) -> Outcome:
        p, pc, n_max = self.params, self.pc, self.config.n_max
        start = p.with_t(p.t / 2)
        flowed = orthopoly.integrate_toda(start, n_max, p.t, pc)
        direct = orthopoly.recurrence_from_moments(p, n_max, pc)
        gaps = [Gap(flowed.alpha_n[k], direct.alpha_n[k]) for k in range(n_max + 1)]
        gaps += [Gap(flowed.beta_n[k], direct.beta_n[k]) for k in range(1, n_max + 1)]
        return _gap(worst(gaps))

    # ------------------------------------------------------------------
    # ladder structure
    # ------------------------------------------------------------------

    def _checks_aux(self) -> Iterable[Check]:
        p, pc, n = self.params, self.pc, self.config.n
        names = (
            "lowering",
            "raising",
            "S1",
            "S2",
            "S2'",
            "S1 residue at z=1",
            "S1 residue at z=-1",
            "alpha_n from R_n",
            "double pole at z=1",
            "double pole at z=-1",
            "linear r/beta relation",
            "p1 relation",
            "telescoped R sum",
            "R-free identity",
        )
        for name in names:
            if name == "raising" and n == 0:
                continue
            if name == "R-free identity" and (n == 0 or p.t == 0):
                continue
            yield Check(f"{name} n={n}", "ladder operators and compatibility conditions", lambda name=name: self._structure(name))
        if p.t != 0:
            yield Check(
                "R_0 Kummer vs quadrature" if p.alpha > 0 else "R_0 Kummer vs moments",
                "initial condition R_0(t)",
                self._r0,
            )
        if p.alpha == -0.5 and p.beta == -0.5:
            yield Check("R_0 Bessel limit", "R_0 at a = b = -1/2", self._r0_bessel)
            yield Check(
                "R_0 Bessel limit, argument 2t",
                "R_0 at a = b = -1/2 (printed argument)",
                lambda: self._r0_bessel(2),
                asserted=False,
            )

    def _structure(self, name: str) -> Outcome:
        p = self.params
        gaps = self.memo("structure", lambda: ladder.structure_residuals(p, self.config.n, p.t, Z_SAMPLES, self.pc))
        return _gap(gaps[name])

    def _r0(self) -> Outcome:
        p = self.params
        value = ladder.r0_initial(p, self.pc)
        if p.alpha > 0:
            _, other = ladder.aux_from_quadrature(p, 0, self.pc)
        else:
            _, other = ladder.moment_route_aux(p, 0, self.pc)
        return _gap(Gap(value, other), value=value)

    def _r0_bessel(self, scale: int = 1) -> Outcome:
        p = self.params
        value = ladder.r0_bessel_limit(p.t, self.pc, argument_scale=scale)
        return _gap(Gap(value, ladder.r0_initial(p, self.pc)), value=value)

    # ------------------------------------------------------------------
    # Painleve V and sigma form
    # ------------------------------------------------------------------

    def _grid(self) -> Tuple[float, float, int]:
        if self.config.grid is not None:
            return self.config.grid
        t = abs(float(self.params.t)) or 1.0
        return (t / 2, 3 * t / 2, 5)

    def _checks_painleve(self) -> Iterable[Check]:
        p, pc = self.params, self.pc
        n = max(self.config.n, 1)
        t = p.t if p.t != 0 else 1.0
        yield Check(
            "P_V parameters (a, b, c, d)",
            "P_V parameters",
            lambda: Outcome(value=", ".join(str(v) for v in painleve.pv_parameters(p, n))),
            asserted=False,
        )
        yield Check(f"P_V residual on grid n={n}", "P_V equation for Y", lambda: _gap(painleve.pv_residual(n, p, self._grid(), pc)), tolerance=PAINLEVE_TOL)
        yield Check(
            "P_V integration vs difference iteration",
            "P_V equation for Y",
            lambda: _gap(Gap(painleve.integrate_pv(n, p, t / 2, t, pc), painleve.y_value(p, n, t, pc))),
            tolerance=ODE_ROUTE_TOL,
        )
        for case in HamiltonianCase:
            yield Check(
                f"Hamiltonian case {case.value}",
                "Hamiltonian identity",
                lambda case=case: _gap(painleve.hamiltonian_identity(n, p, t, case, pc)),
                tolerance=PAINLEVE_TOL,
            )
        yield Check(
            "Hamiltonian case II (printed signs)",
            "Hamiltonian identity (printed form)",
            lambda: _gap(painleve.hamiltonian_identity(n, p, t, HamiltonianCase.CASE_II, pc, printed=True)),
            asserted=False,
        )
        yield Check(f"sigma form n={n}", "Jimbo-Miwa-Okamoto sigma form", lambda: _gap(painleve.sigma_form_residual(n, p, t, pc)), tolerance=PAINLEVE_TOL)
        yield Check(
            f"sigma form, sigma'' from the Riccati equations n={n}",
            "Jimbo-Miwa-Okamoto sigma form (Riccati route)",
            lambda: _gap(painleve.sigma_form_residual(n, p, t, pc, riccati=True)),
            asserted=False,
        )
        yield Check(f"discrete sigma form n={n}", "discrete sigma form", lambda: _gap(painleve.discrete_sigma_residual(p, t, n, pc)), tolerance=PAINLEVE_TOL)
        yield Check(
            f"deformed ODE for P_n n={n}",
            "second-order ODE for P_n",
            lambda: _gap(painleve.deformed_ode_residual(n, p, t, Z_SAMPLES, pc)),
            tolerance=PAINLEVE_TOL,
        )
        yield Check(
            "deformed ODE (printed pole term)",
            "second-order ODE for P_n (printed form)",
            lambda: _gap(painleve.deformed_ode_residual(n, p, t, Z_SAMPLES, pc, printed=True)),
            asserted=False,
        )
        for key in ("Y(0)", "Y'(0)", "sigma(0)", "sigma'(0)"):
            yield Check(
                f"initial condition {key}",
                "initial conditions at t = 0",
                lambda key=key: _gap(painleve.initial_condition_gaps(p, n, pc)[key]),
                tolerance=INITIAL_TOL,
            )
        yield Check(
            f"D_n from sigma integral n={n}",
            "D_n from the sigma function",
            lambda: _gap(Gap(painleve.reconstruct_hankel(p, n, t, pc), moments.hankel_det(p.with_t(t), n, pc))),
            tolerance=RECONSTRUCT_TOL,
        )

    # ------------------------------------------------------------------
    # Toeplitz + Hankel structure
    # ------------------------------------------------------------------

    def _cases(self) -> Sequence[int]:
        return (self.config.case,) if self.config.case else (1, 2, 3, 4)

    def _checks_struct_det(self) -> Iterable[Check]:
        p, pc = self.params, self.pc
        n = max(self.config.n, 1)
        for name in self._transform_names():
            yield Check(
                f"{name} ({TRANSFORM_SEEDS} seeds, {TRANSFORM_TRUNC}x{TRANSFORM_TRUNC})",
                "banded factorizations",
                lambda name=name: Outcome(residual=self._transform_results()[name]),
            )
        for case in self._cases():
            if not struct_mat.is_integrable(SymbolCase(case), p):
                continue
            yield Check(
                f"Toeplitz+Hankel case {case} n={n}",
                f"Hankel determinant as Toeplitz+Hankel, case {case}",
                lambda case=case: self._det_identity(case, n),
            )
        yield Check(
            "case 4 with b = 1, n = 1 equals 2/pi",
            "Toeplitz+Hankel case 4",
            self._case4_hand_value,
            tolerance=10.0 ** (-self.config.digits + 10),
        )
        if struct_mat.is_integrable(SymbolCase.CASE_2, p) and struct_mat.is_integrable(SymbolCase.CASE_3, p):
            yield Check(f"det(T+H)(a+) = det(T-H)(a-) n={n}", "a+ and a- share a#", lambda: self._cross(n))
        if struct_mat.is_integrable(SymbolCase.CASE_2, p) and struct_mat.is_integrable(SymbolCase.CASE_3, p.reflected()):
            yield Check(f"case 2 vs case 3 under x -> -x n={n}", "theta -> theta + pi", lambda: self._case_reflection(n))

    @staticmethod
    def _transform_names() -> Tuple[str, ...]:
        return (
            "D+ A D+^T = A+",
            "D- A D-^T = A-",
            "D- A+ D-^T = R A# R",
            "D+ A- D+^T = R A# R",
            "B = S# R A# R S#^T",
            "B = S+ A+ S+^T",
            "B = S- A- S-^T",
            "B = S A S^T",
            "D A D^T = R A# R",
            "a# consistency",
            "b -> a# -> b",
        )

    def _transform_results(self) -> Dict[str, Any]:
        def sweep() -> Dict[str, Any]:
            length = 2 * TRANSFORM_TRUNC + 5
            results = [
                struct_mat.transform_check(struct_mat.random_even_sequence(length, seed), TRANSFORM_TRUNC)
                for seed in range(TRANSFORM_SEEDS)
            ]
            return {k: max(r[k] for r in results) for k in results[0]}

        return self.memo("transform", sweep)

    def _det_identity(self, case: int, n: int) -> Outcome:
        lhs, rhs, _ = struct_mat.det_identity(case, self.params, n, self.pc)
        return Outcome(value=lhs, gap=Gap(lhs / rhs, 1) if rhs != 0 else Gap(lhs, rhs), note=f"rhs={rhs}")

    def _case4_hand_value(self) -> Outcome:
        pc = self.pc
        sym = struct_mat.fourier_coeffs(SymbolCase.CASE_4, WeightParams(0, 0, 0), 4, pc)
        value = struct_mat.case_determinant(SymbolCase.CASE_4, sym, 1, pc)
        with pc.workspace() as mp:
            return _gap(Gap(value, 2 / mp.pi), value=value)

    def _cross(self, n: int) -> Outcome:
        k_max = 2 * n + 2
        plus = struct_mat.fourier_coeffs(SymbolCase.CASE_2, self.params, k_max, self.pc)
        minus = struct_mat.fourier_coeffs(SymbolCase.CASE_3, self.params, k_max, self.pc)
        return _gap(struct_mat.cross_det_identity(plus.coeffs, minus.coeffs, n, self.pc))

    def _case_reflection(self, n: int) -> Outcome:
        k_max = 2 * n + 2
        pc = self.pc
        two = struct_mat.fourier_coeffs(SymbolCase.CASE_2, self.params, k_max, pc)
        three = struct_mat.fourier_coeffs(SymbolCase.CASE_3, self.params.reflected(), k_max, pc)
        return _gap(
            Gap(
                struct_mat.case_determinant(SymbolCase.CASE_2, two, n, pc),
                struct_mat.case_determinant(SymbolCase.CASE_3, three, n, pc),
            )
        )

    # ------------------------------------------------------------------
    # Fredholm determinants
    # ------------------------------------------------------------------

    def _checks_fredholm(self) -> Iterable[Check]:
        pc = self.pc
        t = self.params.t
        n = self.config.n
        for case in self._cases():
            yield Check(
                f"det(I + Q_n K_{case} Q_n) n={n}",
                f"Fredholm determinant, case {case}",
                lambda case=case: self._fredholm_value(case, n),
                asserted=False,
            )
            if n >= 1:
                yield Check(
                    f"D_n = leading factor x Fredholm det, case {case} n={n}",
                    f"D_n through det(I + Q_n K Q_n), case {case}",
                    lambda case=case: Outcome(residual=fredholm.identity_check(case, n, t, pc)),
                )
            yield Check(
                f"truncation stability case {case}",
                "kernel truncation",
                lambda case=case: self._truncation(case, n),
                tolerance=10.0 ** (-self.config.digits / 2),
            )
        yield Check(
            "K_2 at t vs K_3 at -t",
            "sign flip of t",
            lambda: _gap(Gap(fredholm.fredholm_det(2, t, n, pc)[0], fredholm.fredholm_det(3, -t, n, pc)[0])),
        )
        yield from self._probe_checks()

    def _fredholm_value(self, case: int, n: int) -> Outcome:
        value, report = fredholm.fredholm_det(case, self.params.t, n, self.pc)
        return Outcome(value=value, note=f"m={report.m_used} tail<={float(report.tail_bound):.1e}")

    def _truncation(self, case: int, n: int) -> Outcome:
        value, report = fredholm.fredholm_det(case, self.params.t, n, self.pc)
        wider = fredholm.truncated_det(case, self.params.t, n, report.m_used + 10, self.pc)
        return Outcome(residual=abs(value - wider), note=f"m={report.m_used}")

    def _probe(self) -> fredholm.AsymptoticProbe:
        case = self.config.case or 1
        t = self.params.t if self.params.t != 0 else 1.0
        return self.memo(
            "probe",
            lambda: fredholm.asymptotic_probe(
                case,
                range(1, 7),
                t,
                self.pc,
                barnes_params=WeightParams(1.5, 0.5),
                barnes_n=(4, 8, 12, 16, 20),
                phi_at=(2, 1),
            ),
        )

    def _probe_checks(self) -> Iterable[Check]:
        for n in range(1, 7):
            yield Check(
                f"D_n / leading factor n={n}",
                "large-n leading factor",
                lambda n=n: Outcome(value=self._probe().trend[n - 1].value),
                asserted=False,
            )
        yield Check(
            "D_6 / leading factor - 1",
            "large-n leading factor",
            lambda: Outcome(residual=abs(self._probe().trend[-1].value - 1)),
            tolerance=TREND_TOL,
        )
        yield Check(
            "leading-factor deviation decreases in n",
            "large-n leading factor",
            lambda: Outcome(residual=0 if self._probe().trend_monotone else 1),
        )
        for n in range(1, 7):
            yield Check(
                f"|log det| / ((t/2)^(2n+2)/(2n+2)!) n={n}",
                "conjectured correction term",
                lambda n=n: self._row(self._probe().correction[n - 1]),
                asserted=False,
            )
        for i, n in enumerate((4, 8, 12, 16, 20)):
            yield Check(
                f"D_n(0) / Barnes G form n={n}",
                "conjectured large-n constant",
                lambda i=i: self._row(self._probe().barnes[i]),
                asserted=False,
            )
        yield Check("phi identity n=2 t=1", "phi from p1", lambda: _gap(self._probe().phi), tolerance=PHI_TOL)
        yield Check(
            "phi identity with +t^2/16",
            "phi from p1 (printed sign)",
            lambda: _gap(self._probe().phi_printed),
            asserted=False,
        )

    @staticmethod
    def _row(row: fredholm.ProbeRow) -> Outcome:
        return Outcome(value=row.value, note=row.note)

    # ------------------------------------------------------------------
    # everything
    # ------------------------------------------------------------------

    def _checks_verify_all(self) -> Iterable[Check]:
        for command in ("moments", "recurrence", "aux", "painleve", "struct_det", "fredholm"):
            for check in getattr(self, f"_checks_{command}")():
                yield Check(f"{command.replace('_', '-')}: {check.name}", check.ref, check.compute, check.asserted, check.tolerance)
