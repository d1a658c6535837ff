"""Command-line interface.

Exit codes: 0 Separable, 2 Entangled, 3 Boundary/undecided, 1 error.
Every report embeds the tool version, the seed and the tolerances in effect,
and output is byte-identical for identical seed and configuration.
"""

import argparse
import csv
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .criteria import (TOL_BOUNDARY, Verdict, WWFamilyParams,
                       decide_separability, ppt_decide, simon_lhs,
                       werner_wolf_family, werner_wolf_family_lhs_claim,
                       werner_wolf_lhs)
from .exceptions import CvWitnessError
from .fock import seesaw_lambda, gaussian_op_fock
from .io import (criterion_report_dict, dump_report, load_cm, load_detector,
                 load_nongauss, witness_report_dict)
from .nongauss import decide_separability_nongauss
from .standard_form import Family, TwoModeStandardForm, detect_family
from .symplectic import TOL_PSD, CovMatrix
from .witness import lambda_closed_form, minmax_optimize

EXIT_SEPARABLE = 0
EXIT_ERROR = 1
EXIT_ENTANGLED = 2
EXIT_BOUNDARY = 3

_VERDICT_EXIT = {
    Verdict.SEPARABLE: EXIT_SEPARABLE,
    Verdict.ENTANGLED: EXIT_ENTANGLED,
    Verdict.BOUNDARY: EXIT_BOUNDARY,
}


def _n_threads() -> int:
    try:
        return max(1, int(os.environ.get("CVW_THREADS", "1")))
    except ValueError:
        return 1


def _meta(args) -> dict:
    return {
        "version": __version__,
        "seed": args.seed,
        "tolerances": {"tol_psd": args.tol_psd, "tol_boundary": TOL_BOUNDARY},
    }


def cmd_check(args) -> int:
    if args.criterion == "auto":
        gamma, partition = load_cm(args.input)
        family = detect_family(gamma)
        criterion = ("simon" if family is Family.TWO_MODE else "wernerwolf")
    else:
        criterion = args.criterion
        gamma, partition = load_nongauss(args.input) \
            if criterion == "nongauss" else load_cm(args.input)

    if criterion == "nongauss":
        report = decide_separability_nongauss(gamma, partition)
        payload = {**_meta(args), "report": criterion_report_dict(report)}
        dump_report(payload, sys.stdout)
        return _VERDICT_EXIT[report.verdict]
    if criterion == "ppt":
        ppt = ppt_decide(gamma, partition)
        verdict = Verdict.SEPARABLE if ppt.is_ppt else Verdict.ENTANGLED
        payload = {**_meta(args), "report": {
            "verdict": verdict.value, "criterion": "ppt",
            "is_ppt": ppt.is_ppt,
            "min_pt_symplectic_eig": ppt.min_pt_symplectic_eig}}
        dump_report(payload, sys.stdout)
        return _VERDICT_EXIT[verdict]
    if criterion == "witness":
        report = minmax_optimize(gamma, restarts=args.restarts, seed=args.seed)
        verdict = (Verdict.BOUNDARY if report.boundary else
                   Verdict.ENTANGLED if report.entangled else Verdict.SEPARABLE)
        payload = {**_meta(args), "report": {
            **witness_report_dict(report), "verdict": verdict.value,
            "criterion": "witness"}}
        dump_report(payload, sys.stdout)
        return _VERDICT_EXIT[verdict]

    family = detect_family(gamma)
    wanted = Family.TWO_MODE if criterion == "simon" else Family.WERNER_WOLF
    if family is not wanted:
        raise CvWitnessError(
            f"criterion {criterion} needs a {wanted.value} state, "
            f"got {gamma.n_modes} modes")
    report = decide_separability(gamma, partition)
    payload = {**_meta(args), "report": criterion_report_dict(report)}
    dump_report(payload, sys.stdout)
    return _VERDICT_EXIT[report.verdict]


def cmd_oracle(args) -> int:
    d = load_detector(args.input)
    cutoff = args.cutoff
    if cutoff is None:
        cutoff = 25 if d.family is Family.TWO_MODE else 6
    lam_closed, _ = lambda_closed_form(d)
    rho = gaussian_op_fock(d.to_cm(), cutoff)
    n_b = d.n_modes // 2
    dims = (cutoff ** n_b, cutoff ** n_b)
    res = seesaw_lambda(rho, dims, restarts=args.restarts, seed=args.seed)
    delta = abs(lam_closed - res.value)
    payload = {**_meta(args), "report": {
        "lambda_closed": lam_closed, "lambda_seesaw": res.value,
        "delta": delta, "cutoff": cutoff, "converged": res.converged,
        "iterations": res.iterations}}
    dump_report(payload, sys.stdout)
    return EXIT_SEPARABLE if delta <= 1e-3 else EXIT_ERROR


def _ww_sample(rng: np.random.Generator) -> WWFamilyParams:
    """Random valid five-parameter family point (rejection sampling)."""
    while True:
        a, b, c, d, e = rng.uniform(0.2, 3.0, size=5)
        if a * d - b * c > 1e-3 and c * e - a > 1e-3:
            return WWFamilyParams(a, b, c, d, e)


def _sweep_row_ww(p: WWFamilyParams) -> list:
    form = werner_wolf_family(p)
    gamma = form.to_cm()
    rep = minmax_optimize(gamma, restarts=2)
    return [p.a, p.b, p.c, p.d, p.e,
            werner_wolf_lhs(form), werner_wolf_family_lhs_claim(p),
            ppt_decide(gamma).is_ppt, rep.ell_limit]


def _sweep_row_tmsv(r: float) -> list:
    a = np.cosh(2 * r) / 2
    c = np.sinh(2 * r) / 2
    form = TwoModeStandardForm(a, a, c, c)
    gamma = form.to_cm()
    rep = minmax_optimize(gamma, restarts=2)
    return [r, simon_lhs(form), "", ppt_decide(gamma).is_ppt, rep.ell_limit]


def cmd_sweep(args) -> int:
    if args.n_samples < 1:
        raise CvWitnessError("n_samples must be at least 1")
    rng = np.random.default_rng(args.seed)
    if args.family == "wernerwolf":
        header = ["a", "b", "c", "d", "e",
                  "lhs_criterion", "lhs_closed_form_claim", "is_ppt", "ell"]
        inputs = [_ww_sample(rng) for _ in range(args.n_samples)]
        worker = _sweep_row_ww
    else:
        header = ["r", "lhs_criterion", "lhs_closed_form_claim", "is_ppt", "ell"]
        inputs = [0.1 * i for i in range(args.n_samples)]
        worker = _sweep_row_tmsv
    with ThreadPoolExecutor(max_workers=_n_threads()) as pool:
        rows = list(pool.map(worker, inputs))
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([f"{v:.12g}" if isinstance(v, float) else v
                             for v in row])
    sys.stdout.write(f"wrote {len(rows)} rows to {args.out}\n")
    return EXIT_SEPARABLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvwitness",
        description="Separability of continuous-variable states via matched "
                    "Gaussian entanglement witnesses.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--cutoff", type=int, default=None)
        p.add_argument("--restarts", type=int, default=5)
        p.add_argument("--tol-psd", dest="tol_psd", type=float, default=TOL_PSD)
        p.add_argument("--format", choices=["json", "csv"], default="json")

    p_check = sub.add_parser("check", help="decide separability of a state file")
    p_check.add_argument("input")
    p_check.add_argument("--criterion", default="auto",
                         choices=["auto", "simon", "wernerwolf", "ppt",
                                  "witness", "nongauss"])
    common(p_check)
    p_check.set_defaults(func=cmd_check)

    p_oracle = sub.add_parser(
        "oracle", help="compare closed-form and Fock-seesaw detector maxima")
    p_oracle.add_argument("input")
    common(p_oracle)
    p_oracle.set_defaults(func=cmd_oracle)

    p_sweep = sub.add_parser("sweep", help="CSV sweep over a state family")
    p_sweep.add_argument("--family", required=True,
                         choices=["wernerwolf", "tmsv"])
    p_sweep.add_argument("-n", "--n-samples", dest="n_samples", type=int,
                         required=True)
    p_sweep.add_argument("out")
    common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CvWitnessError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    except (OSError, ValueError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
