"""One-time search for the two calibration constants.

The reference papers' absolute rate levels depend on an unstated power
normalization, so two constants are left free and frozen here: the
path-loss reference distance (anchored on the common-rate experiment) and
the least-squares boost factor (anchored on the imperfect-SIC sum-rate
experiment). The search runs reduced-trial sweeps over a grid, scores the
anchor windows below, and prints the winning pair; the shipped presets
carry the frozen values.
"""

from dataclasses import dataclass

from .engine import config_from_dict, run_sweep
from .presets import preset_dict

D0_GRID = (5.0, 7.0, 10.0, 14.0, 20.0)
RHO_GRID = (2.0, 3.0, 4.5, 7.0, 10.0)


@dataclass(frozen=True)
class Clause:
    name: str
    value: float
    lo: float
    hi: float

    @property
    def ok(self):
        return self.lo <= self.value <= self.hi

    def __str__(self):
        mark = "pass" if self.ok else "FAIL"
        return f"  [{mark}] {self.name}: {self.value:.3f} (window [{self.lo:g}, {self.hi:g}])"


def _value(points, scheme, metric, alpha, snr):
    for p in points:
        if (
            p.scheme == scheme
            and p.metric == metric
            and p.snr_db == snr
            and ((alpha is None and p.alpha_c is None) or p.alpha_c == alpha)
        ):
            return p.mean_bpcu
    raise KeyError(f"no curve point ({scheme}, {metric}, {alpha}, {snr})")


def _sweep(preset, trials, seed, d0=None, rho=None, snr_grid=None, workers=1):
    doc = preset_dict(preset)
    doc["trials"] = trials
    doc["master_seed"] = seed
    if d0 is not None:
        doc["geometry"]["reference_distance_m"] = d0
    if rho is not None:
        doc["irs"]["boost_factor"] = rho
    if snr_grid is not None:
        doc["snr_grid_db"] = snr_grid
    return run_sweep(config_from_dict(doc), workers=workers), doc["snr_grid_db"]


def common_rate_clauses(points, grid):
    """Anchor windows of the common-message experiment (sets the reference distance)."""
    users = ("common_rate_user1", "common_rate_user2")
    irs30 = [_value(points, "IRS-RSMA", m, 0.9, 30) for m in users]
    irs_from_10 = min(
        _value(points, "IRS-RSMA", m, 0.9, s) for m in users for s in grid if s >= 10
    )
    plain_max = max(_value(points, "RSMA", m, 0.9, s) for m in users for s in grid)
    gain30 = min(
        _value(points, "IRS-RSMA", m, 0.9, 30) - _value(points, "RSMA", m, 0.9, 30) for m in users
    )
    return [
        Clause("assisted common rate at 30 dB", min(irs30), 6.0, 8.0),
        Clause("assisted common rate at 30 dB (worst user upper)", max(irs30), 6.0, 8.0),
        Clause("assisted common rate from 10 dB on", irs_from_10, 4.0, float("inf")),
        Clause("unassisted common rate everywhere", plain_max, 0.0, 4.0),
        Clause("assistance gain at 30 dB", gain30, 3.0, float("inf")),
    ]


def sic_sum_rate_clauses(points):
    """Anchor windows of the imperfect-SIC experiment (sets the boost factor)."""
    clauses = []
    for scheme in ("NOMA", "IRS-NOMA"):
        s35 = _value(points, scheme, "sum_rate", None, 35)
        s40 = _value(points, scheme, "sum_rate", None, 40)
        clauses.append(Clause(f"{scheme} plateau width 35-40 dB", abs(s40 - s35), 0.0, 0.15))
        clauses.append(Clause(f"{scheme} plateau level", s40, 5.4, 8.4))
    rsma25 = _value(points, "IRS-RSMA", "sum_rate", 0.5, 25)
    tdma25 = _value(points, "TDMA", "sum_rate", None, 25)
    noma25 = _value(points, "NOMA", "sum_rate", None, 25)
    clauses.append(Clause("assisted split sum rate at 25 dB", rsma25, 12.0, 16.0))
    clauses.append(Clause("margin over TDMA at 25 dB", rsma25 - tdma25, 4.5, float("inf")))
    clauses.append(Clause("margin over NOMA at 25 dB", rsma25 - noma25, 4.5, float("inf")))
    for snr in (25, 30, 35, 40):
        diff = _value(points, "TDMA", "sum_rate", None, snr) - _value(
            points, "NOMA", "sum_rate", None, snr
        )
        clauses.append(Clause(f"TDMA over NOMA at {snr} dB", diff, 0.0, float("inf")))
    return clauses


def csi_sum_rate_clauses(points):
    """Informational windows of the imperfect-CSI experiment (not search targets)."""
    perfect = _value(points, "IRS-RSMA/perfect-csi", "sum_rate", 0.9, 30)
    imperfect = _value(points, "IRS-RSMA/imperfect-csi", "sum_rate", 0.9, 30)
    noma_imp = _value(points, "IRS-NOMA/imperfect-csi", "sum_rate", None, 30)
    t35 = _value(points, "IRS-TDMA/imperfect-csi", "sum_rate", None, 35)
    t40 = _value(points, "IRS-TDMA/imperfect-csi", "sum_rate", None, 40)
    return [
        Clause("assisted sum rate at 30 dB, perfect estimates", perfect, 18.0, 23.0),
        Clause("degradation under poor estimates", perfect - imperfect, 0.0, 2.5),
        Clause("margin over assisted superposition", imperfect - noma_imp, 4.0, float("inf")),
        Clause("assisted time-division plateau width", abs(t40 - t35), 0.0, 0.3),
        Clause("assisted time-division plateau level", t40, 3.5, 7.0),
    ]


def evaluate_candidate(d0, rho, trials, seed, workers=1):
    fig2_points, fig2_grid = _sweep("fig2", trials, seed, d0=d0, workers=workers)
    fig3_points, _ = _sweep(
        "fig3", trials, seed, d0=d0, rho=rho, snr_grid=[25, 30, 35, 40], workers=workers
    )
    return common_rate_clauses(fig2_points, fig2_grid) + sic_sum_rate_clauses(fig3_points)


def _score(clauses):
    """(number of passing windows, total normalized margin into the window)."""
    passing = sum(c.ok for c in clauses)
    margin = 0.0
    for c in clauses:
        width = (c.hi - c.lo) if c.hi != float("inf") else 2.0
        lo_edge = (c.value - c.lo) / width
        hi_edge = (c.hi - c.value) / width if c.hi != float("inf") else lo_edge
        margin += min(lo_edge, hi_edge, 1.0)
    return passing, margin


def run_calibration(trials=400, seed=None, quiet=False, d0_grid=D0_GRID, rho_grid=RHO_GRID,
                    workers=1):
    """Grid search; returns (best_d0, best_rho, clause list of the winner)."""
    seed = 424242 if seed is None else seed
    best = None
    for d0 in d0_grid:
        for rho in rho_grid:
            clauses = evaluate_candidate(d0, rho, trials, seed, workers=workers)
            score = _score(clauses)
            if not quiet:
                print(f"d0={d0:g} m, boost={rho:g}: {score[0]}/{len(clauses)} windows, "
                      f"margin {score[1]:.2f}")
            if best is None or score > best[0]:
                best = (score, d0, rho, clauses)
    _, d0, rho, clauses = best
    if not quiet:
        print(f"\nfrozen constants: reference_distance_m = {d0:g}, boost_factor = {rho:g}")
        for c in clauses:
            print(c)
        print("(update REFERENCE_DISTANCE_M / BOOST_FACTOR in presets.py to freeze)")
    return d0, rho, clauses
