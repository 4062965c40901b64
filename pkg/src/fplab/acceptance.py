"""The acceptance suite: twelve quantitative checks tying every module to its
oracle (sampled Gaussian equilibrium, Fourier-side eigenfunctions with
eigenvalues 0, -1, -2, ..., closed-form kernel transforms, and exact pathwise
coupling).  Each criterion returns a dict with a ``pass`` flag and the
numbers behind it; ``run_all`` aggregates them.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .grids import Field, WeightSpec, gaussian_density, make_grid, mass, weighted_norm
from .inequalities import (
    dirichlet_form,
    dissipativity_check,
    fractional_sobolev_check,
    gradient_convolution_check,
    psi_constant,
    psi_profile,
    regularization_norm,
)
from .kernels import fourier_ratio_constant, gaussian_reference_kernel
from .operators import (
    Classical,
    DiscreteClassical,
    DiscreteFractional,
    Fractional,
    assemble,
    operator_distance,
)
from .probes import probe_family
from .sde import (
    AlphaStable,
    CompoundPoisson,
    JumpOuSpec,
    coupled_decay,
    wasserstein_contraction_check,
)
from .semigroup import EvolveSpec, decay_rate, evolve, steady_state
from .spectra import (
    eigen_spectrum,
    fourier_side_generator,
    perturbation_certificate,
    projector_distance,
    spectral_projector,
)
from .splitting import ClassicalSplitting, FractionalSplitting, assemble_splitting

from .kernels import rescale


# ---------------------------------------------------------------------------
# shared expensive objects


@lru_cache(maxsize=None)
def _classical_op():
    return assemble(Classical(), make_grid(12.0, 1025))


@lru_cache(maxsize=None)
def _dc_grid(eps: float):
    n = int(round(192.0 / eps)) + 1  # h = eps/8 exactly at L = 12
    return make_grid(12.0, n)


@lru_cache(maxsize=None)
def _dc_op(eps: float):
    return assemble(DiscreteClassical(eps=eps), _dc_grid(eps))


@lru_cache(maxsize=None)
def _frac_op(alpha: float):
    return assemble(Fractional(alpha=alpha), make_grid(60.0, 2049))


@lru_cache(maxsize=None)
def _fitted_rate(which: str, param: float) -> float:
    """Decay-rate fit on the same operator used for the gap computations."""
    if which == "classical":
        op, w = _classical_op(), WeightSpec(p=1, q=1)
    elif which == "discrete-classical":
        op, w = _dc_op(param), WeightSpec(p=1, q=1)
    else:
        op, w = _frac_op(param), WeightSpec(p=1, q=0)
    g = op.grid
    f0 = gaussian_density(g, 1.0, 1.0)
    spec = EvolveSpec(t_end=4.0, dt=0.05, scheme="ExactExpm")
    rep = decay_rate(op, f0, w, spec, equilibrium=steady_state(op))
    return rep.fitted_rate


# ---------------------------------------------------------------------------
# criteria


def criterion_1() -> dict:
    """Local-diffusion equilibrium matches the sampled standard Gaussian."""
    op = _classical_op()
    G = steady_state(op)
    err = weighted_norm(
        Field(op.grid, G.values - gaussian_density(op.grid, 1.0, 0.0).values),
        WeightSpec(p=1),
    )
    return {"name": "classical-equilibrium", "l1_error": err, "pass": bool(err <= 1e-6)}


def criterion_2() -> dict:
    """Local-diffusion spectrum matches the integer ladder 0, -1, -2, -3."""
    rep = eigen_spectrum(_classical_op(), k_leading=4)
    target = np.array([0.0, -1.0, -2.0, -3.0])
    offs = np.abs(rep.eigenvalues.real[:4] - target)
    return {
        "name": "classical-spectrum",
        "eigenvalues": [float(v) for v in rep.eigenvalues.real[:4]],
        "max_offset": float(offs.max()),
        "pass": bool(offs.max() <= 1e-3),
    }


def criterion_3() -> dict:
    """Uniform spectral gap of the power-law family across orders."""
    fgaps = {}
    ok = True
    for al in (0.6, 1.0, 1.4, 1.8):
        gap = eigen_spectrum(fourier_side_generator(al, 30.0, 2049)).gap
        fgaps[al] = gap
        ok = ok and (-1.1 <= gap <= -0.85)
    pgaps = {}
    for al in (1.0, 1.5):
        gap = eigen_spectrum(_frac_op(al)).gap
        pgaps[al] = gap
        ok = ok and (abs(gap + 1.0) <= 0.15)
    return {
        "name": "uniform-fractional-gap",
        "fourier_side_gaps": fgaps,
        "physical_gaps": pgaps,
        "pass": bool(ok),
    }


def criterion_4() -> dict:
    """Smooth-kernel jump family: gap and equilibrium converge to the local
    limit as the kernel scale shrinks, with uniform decay rates."""
    eps_list = (0.4, 0.2, 0.1)
    gap_offsets, steady_errs, rates = [], [], []
    for eps in eps_list:
        op = _dc_op(eps)
        gap_offsets.append(abs(eigen_spectrum(op).gap + 1.0))
        G = steady_state(op)
        diff = G.values - gaussian_density(op.grid, 1.0, 0.0).values
        steady_errs.append(weighted_norm(Field(op.grid, diff), WeightSpec(p=1)))
        rates.append(_fitted_rate("discrete-classical", eps))
    slope = float(np.polyfit(np.log(eps_list), np.log(steady_errs), 1)[0])
    ok = (
        gap_offsets[0] > gap_offsets[1] > gap_offsets[2]
        and gap_offsets[2] <= 0.05
        and slope >= 0.8
        and max(rates) <= -0.8
    )
    return {
        "name": "discrete-to-classical",
        "gap_offsets": gap_offsets,
        "steady_errors": steady_errs,
        "steady_slope": slope,
        "decay_rates": rates,
        "pass": bool(ok),
    }


def criterion_5() -> dict:
    """Operator convergence: O(eps) distance slope for the smooth-kernel
    family, monotone decrease for the truncated power-law family."""
    g = make_grid(12.0, 1921)
    src = WeightSpec(p=2, q=1, s=3)
    tgt = WeightSpec(p=2, q=1)
    m0 = assemble(Classical(), g)
    eps_list = (0.4, 0.2, 0.1)
    dists = [
        operator_distance(assemble(DiscreteClassical(eps=e), g), m0, src, tgt,
                          probes=32, oscillatory=12)
        for e in eps_list
    ]
    slope = float(np.polyfit(np.log(eps_list), np.log(dists), 1)[0])
    g2 = make_grid(25.6, 2049)
    f0 = assemble(Fractional(alpha=1.0, constant=1.0), g2)
    src2 = WeightSpec(p=2, q=1, s=2)
    df = [
        operator_distance(assemble(DiscreteFractional(eps=e, alpha=1.0), g2),
                          f0, src2, tgt, probes=32)
        for e in (0.2, 0.1, 0.05)
    ]
    ok = 0.7 <= slope <= 1.3 and df[0] > df[1] > df[2]
    return {
        "name": "operator-convergence",
        "distances": dists,
        "slope": slope,
        "fractional_distances": df,
        "pass": bool(ok),
    }


def criterion_6() -> dict:
    """Fourier kernel inequality with the computed ratio constant; the two
    Dirichlet-form paths agree to roundoff."""
    k = gaussian_reference_kernel()
    K = fourier_ratio_constant(k).value
    g = make_grid(12.0, 513)
    failures = 0
    total = 0
    for eps in (0.5, 0.25, 0.1):
        for f in probe_family(g, count=100, seed=6):
            total += 1
            if not gradient_convolution_check(f, k, eps, K)["pass"]:
                failures += 1
    dirichlet_ok = True
    try:
        for f in probe_family(g, count=10, seed=7):
            dirichlet_form(f, k, 0.5, path="both")
    except ArithmeticError:
        dirichlet_ok = False
    ok = K <= 1.2 and failures == 0 and dirichlet_ok
    return {
        "name": "fourier-kernel-inequality",
        "K_star": K,
        "gradient_failures": failures,
        "gradient_total": total,
        "dirichlet_paths_agree": dirichlet_ok,
        "pass": bool(ok),
    }


def criterion_7() -> dict:
    """Dissipativity of the remainder parts: profile bound, probe energy
    inequality for both splitting schemes, monotone PASS in the target."""
    k = gaussian_reference_kernel()
    g = make_grid(12.0, 1025)
    C = psi_constant(k, q=1.0, p=1)
    prof = psi_profile(g, eps=0.05, M=10.0, R=6.0, p=1, q=1.0, C_bound=C, k=k)
    # report the threshold where the profile bound stops holding
    eps0 = 0.0
    for e in np.linspace(0.0, 1.0, 101):
        if psi_profile(g, eps=float(e), M=10.0, R=6.0, p=1, q=1.0, C_bound=C, k=k).sup <= -0.5:
            eps0 = float(e)
    classical_reports = {}
    ok = prof.sup <= -0.5
    for p in (1, 2):
        _, B = assemble_splitting(Classical(), g, ClassicalSplitting(M=10.0, R=6.0))
        rep = dissipativity_check(B, WeightSpec(p=p, q=1.0), a=-0.5)
        classical_reports[p] = rep.worst_ratio
        ok = ok and rep.passed
        # monotonicity of PASS in the target
        ok = ok and dissipativity_check(B, WeightSpec(p=p, q=1.0), a=-0.25).passed
    five = {}
    for eps, grid in ((0.05, make_grid(25.6, 2049)), (0.02, make_grid(10.24, 2049))):
        _, B = assemble_splitting(
            DiscreteFractional(eps=eps, alpha=1.0), grid,
            FractionalSplitting(eta=0.5, Lcut=2.0, R=4.0),
        )
        rep = dissipativity_check(B, WeightSpec(p=1, q=0.4), a=-0.2)
        five[eps] = rep.worst_ratio
        ok = ok and rep.passed
    return {
        "name": "dissipativity",
        "psi_sup": prof.sup,
        "psi_C": C,
        "eps0_threshold": eps0,
        "classical_worst": classical_reports,
        "five_part_worst": five,
        "pass": bool(ok),
    }


def criterion_8() -> dict:
    """Regularization of the iterated bounded-part/semigroup convolution and
    the short-time smoothing blowup of the one-fold map."""
    g = make_grid(12.0, 513)
    A, B = assemble_splitting(Classical(), g, ClassicalSplitting(M=10.0, R=6.0))
    rep2 = regularization_norm(A, B, n_conv=2, t_grid=[1.0, 2.0, 4.0, 6.0],
                               source=WeightSpec(p=2, q=1), target=WeightSpec(p=2, q=1, s=1))
    gf = make_grid(30.0, 1025)
    Af, Bf = assemble_splitting(Fractional(alpha=1.0), gf, ClassicalSplitting(M=10.0, R=6.0))
    rep1 = regularization_norm(Af, Bf, n_conv=1, t_grid=[0.01, 1.0],
                               source=WeightSpec(p=1), target=WeightSpec(p=2),
                               include_sharp=True)
    blowup = rep1["rows"][0]["norm"] / max(rep1["rows"][1]["norm"], 1e-300)
    ok = rep2["fitted_rate"] <= -0.3 and blowup >= 10.0
    return {
        "name": "regularization",
        "two_fold_rate": rep2["fitted_rate"],
        "blowup_ratio": blowup,
        "pass": bool(ok),
    }


def criterion_9() -> dict:
    """Trajectory positivity and exact mass conservation for all four
    families; strict positivity of every steady state."""
    cases = [
        (Classical(), make_grid(12.0, 513), 0.01),
        (DiscreteClassical(eps=0.2), make_grid(12.0, 961), 0.02),
        (Fractional(alpha=1.5), make_grid(12.0, 513), 0.01),
        (DiscreteFractional(eps=0.2, alpha=1.0), make_grid(12.0, 513), 0.01),
    ]
    worst_mass, worst_min = 0.0, 0.0
    steady_pos = True
    count = 0
    for model, g, dt in cases:
        op = assemble(model, g)
        G = steady_state(op)
        steady_pos = steady_pos and bool(np.all(G.values[1:-1] > 0.0))
        for f in probe_family(g, count=5, seed=9):
            f0 = Field(g, np.abs(f.values))
            m0 = mass(f0)
            traj = evolve(op, f0, EvolveSpec(t_end=0.5, dt=dt, scheme="BackwardEuler",
                                             record_every=10))
            count += 1
            for _, fld in traj:
                worst_mass = max(worst_mass, abs(mass(fld) - m0))
                worst_min = min(worst_min, float(fld.values.min()))
    ok = worst_mass <= 1e-12 and worst_min >= -1e-12 and steady_pos
    return {
        "name": "positivity-and-mass",
        "trajectories": count,
        "worst_mass_drift": worst_mass,
        "worst_min": worst_min,
        "steady_states_positive": steady_pos,
        "pass": bool(ok),
    }


def criterion_10() -> dict:
    """Rank-1 spectral projectors, their convergence as the kernel truncation
    is removed, and smallness of the resolvent-perturbation operator."""
    g = make_grid(12.8, 1025)
    m0 = Fractional(alpha=1.0, constant=1.0)
    p0 = spectral_projector(assemble(m0, g), radius=0.5)
    ranks, dists = [], []
    for eps in (0.2, 0.1, 0.05):
        pe = spectral_projector(assemble(DiscreteFractional(eps=eps, alpha=1.0), g),
                                radius=0.5)
        ranks.append(pe.rank)
        dists.append(projector_distance(pe, p0, g))
    zs = [0.5 * np.exp(1j * 2.0 * np.pi * (k + 0.5) / 8) for k in range(8)]
    cert = perturbation_certificate(
        DiscreteFractional(eps=0.05, alpha=1.0), m0, g,
        FractionalSplitting(eta=0.1, Lcut=1.0, R=2.0), zs,
    )
    ok = (
        all(r == 1 for r in ranks)
        and dists[0] > dists[1] > dists[2]
        and cert["pass"]
    )
    return {
        "name": "projector-perturbation",
        "ranks": ranks,
        "distances": dists,
        "certificate_worst": cert["worst_norm"],
        "pass": bool(ok),
    }


def criterion_11() -> dict:
    """Pathwise coupling exactness and empirical Wasserstein contraction."""
    ok = True
    coupled_errs = {}
    for alpha in (1.2, 1.5):
        spec = JumpOuSpec(noise=AlphaStable(alpha=alpha), t_end=2.0, n_paths=100,
                          seed=11, dt_record=0.5)
        r = coupled_decay(spec, 1.0, 0.0)
        coupled_errs[f"stable:{alpha}"] = r["max_error"]
        ok = ok and r["pass"]
    keps = rescale(gaussian_reference_kernel(), 0.2)
    spec = JumpOuSpec(noise=CompoundPoisson(kernel=keps, rate_scale=1.0 / 0.04),
                      t_end=2.0, n_paths=100, seed=12, dt_record=0.5)
    r = coupled_decay(spec, 1.0, 0.0)
    coupled_errs["compound:0.2"] = r["max_error"]
    ok = ok and r["pass"]

    w1 = {}
    for alpha in (1.2, 1.5):
        spec = JumpOuSpec(noise=AlphaStable(alpha=alpha), t_end=2.0, n_paths=100000,
                          seed=13, dt_record=0.5)
        rep = wasserstein_contraction_check(spec, lambda r_, n_: np.full(n_, 3.0),
                                            [0.5, 1.0, 2.0])
        w1[f"stable:{alpha}"] = rep["pass"]
        ok = ok and rep["pass"]
    spec = JumpOuSpec(noise=CompoundPoisson(kernel=keps, rate_scale=1.0 / 0.04),
                      t_end=2.0, n_paths=100000, seed=14, dt_record=0.5)
    rep = wasserstein_contraction_check(spec, lambda r_, n_: np.full(n_, 3.0),
                                        [0.5, 1.0, 2.0])
    w1["compound:0.2"] = rep["pass"]
    ok = ok and rep["pass"]
    return {
        "name": "wasserstein-contraction",
        "coupled_errors": coupled_errs,
        "w1_pass": w1,
        "pass": bool(ok),
    }


def criterion_12() -> dict:
    """Spectral gaps and fitted decay rates agree on the same operators."""
    rows = []
    ok = True
    checks = [("classical", 0.0, _classical_op())]
    checks += [("discrete-classical", e, _dc_op(e)) for e in (0.4, 0.2, 0.1)]
    checks += [("fractional", a, _frac_op(a)) for a in (1.0, 1.5)]
    for which, param, op in checks:
        gap = eigen_spectrum(op).gap
        rate = _fitted_rate(which, param)
        rows.append({"model": which, "param": param, "gap": gap, "rate": rate})
        ok = ok and abs(gap - rate) <= 0.1
    return {"name": "gap-vs-decay-consistency", "rows": rows, "pass": bool(ok)}


CRITERIA = [
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
    criterion_11, criterion_12,
]


def run_all(progress: bool = False) -> dict:
    results = []
    for fn in CRITERIA:
        try:
            res = fn()
        except Exception as exc:
            res = {"name": fn.__name__, "pass": False, "error": str(exc)}
        if progress:
            print(f"{res['name']}: {'PASS' if res['pass'] else 'FAIL'}", flush=True)
        results.append(res)
    return {"results": results, "pass": bool(all(r["pass"] for r in results))}
