"""Command-line interface.

Results go to stdout as JSON; diagnostics go to stderr at the level named by
``CONTRACTION_NORM_LOG`` (``debug``, ``info`` or ``quiet``).

Exit codes: 0 verified, 1 verification failed, 2 bad input or usage.
"""

import argparse
import json
import logging
import math
import os
import sys

import numpy as np

from . import io
from .contraction import (
    DEFAULT_EPSILON_FRACTION,
    DEFAULT_SELF_WEIGHT,
    certify_contraction,
    random_digraph,
    row_stochastic_weights,
    simulate_consensus,
)
from .errors import ContractionNormError
from .linalg import spectral_radius_gelfand
from .norm import GELFAND_AGREEMENT, MAX_KAPPA, construct_norm, verify_certificate
from .schur import eigenvalues

log = logging.getLogger("contraction_norm")

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2
STORED_VALUE_RTOL = 1e-9

_LEVELS = {"debug": logging.DEBUG, "info": logging.INFO, "quiet": logging.CRITICAL + 1}


class InputError(Exception):
    pass


def _setup_logging():
    name = os.environ.get("CONTRACTION_NORM_LOG", "info").strip().lower()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(_LEVELS.get(name, logging.INFO))
    log.propagate = False


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _emit(obj):
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _close(a, b):
    return abs(a - b) <= STORED_VALUE_RTOL * max(1.0, abs(a), abs(b))


def cmd_construct(args):
    A = io.parse_matrix(_read(args.input))
    W, built = construct_norm(A, args.epsilon, max_kappa=args.max_kappa)
    log.info("t=%.6g kappa=%.3g rho=%.12g norm=%.12g", W.t, W.kappa, built.rho, built.norm_value)
    cert = verify_certificate(W, A, trials=args.trials, seed=args.seed)
    _write(args.output, io.emit_certificate(cert, W, A))
    _emit({"output": args.output, "verified": cert.verified, "checks": cert.checks,
           "rho": cert.rho, "norm_value": cert.norm_value, "t": cert.t, "kappa": cert.kappa})
    return EXIT_OK if cert.verified else EXIT_FAILED


def cmd_verify(args):
    A = io.parse_matrix(_read(args.input))
    cf = io.load_certificate(_read(args.certificate))
    stored = cf.certificate
    fresh = verify_certificate(cf.norm, A, trials=args.trials, seed=args.seed)
    problems = []
    if cf.input_digest != io.matrix_digest(A):
        problems.append("input digest does not match the certificate")
    if not cf.factors_consistent():
        problems.append("stored P / P_inv do not match U and t")
    if not stored.verified:
        problems.append("certificate is marked unverified")
    for name in ("rho", "norm_value"):
        if not _close(getattr(stored, name), getattr(fresh, name)):
            problems.append(f"stored {name} {getattr(stored, name)!r} != recomputed {getattr(fresh, name)!r}")
    if not _close(stored.kappa, fresh.kappa):
        problems.append("stored kappa does not match t")
    failed = [k for k, ok in fresh.checks.items() if not ok]
    problems += [f"check failed: {k}" for k in failed]
    for p in problems:
        log.warning(p)
    ok = not problems
    _emit({"verified": ok, "checks": fresh.checks, "problems": problems,
           "rho": fresh.rho, "norm_value": fresh.norm_value, "epsilon": fresh.epsilon,
           "rho_gelfand": fresh.rho_gelfand, "witness_ratio": fresh.witness_ratio,
           "induced_max_ratio": fresh.induced_max_ratio})
    return EXIT_OK if ok else EXIT_FAILED


def cmd_norm(args):
    cf = io.load_certificate(_read(args.certificate))
    if args.matrix:
        value = cf.norm.matrix_norm(io.parse_matrix(_read(args.matrix)))
        _emit({"matrix_norm": value})
    else:
        value = cf.norm.vector_norm(io.parse_vector(_read(args.vector)))
        _emit({"vector_norm": value})
    return EXIT_OK


def cmd_spectrum(args):
    A = io.parse_matrix(_read(args.input))
    spectrum = eigenvalues(A)
    rho_g = spectral_radius_gelfand(A, args.gelfand_k)
    agree = abs(rho_g - spectrum.rho) <= GELFAND_AGREEMENT * max(1.0, spectrum.rho)
    _emit({"eigenvalues": [io.format_complex(z) for z in spectrum.eigenvalues],
           "rho": spectrum.rho, "rho_gelfand": rho_g, "gelfand_k": args.gelfand_k,
           "gelfand_agrees": agree})
    return EXIT_OK


def cmd_contract(args):
    g = random_digraph(args.nodes, args.edge_prob, args.seed)
    W = row_stochastic_weights(g, args.self_weight)
    norm, rate = certify_contraction(W, args.epsilon_fraction)
    x0 = np.random.default_rng(args.seed).standard_normal(args.nodes)
    rep = simulate_consensus(W, x0, args.steps, norm)
    log.info("rho=%.6g rate=%.6g max_ratio=%.6g kappa=%.3g", rep.rho, rate, rep.max_ratio, norm.kappa)
    doc = {
        "nodes": args.nodes,
        "edge_prob": args.edge_prob,
        "seed": args.seed,
        "self_weight": args.self_weight,
        "epsilon_fraction": args.epsilon_fraction,
        "steps": args.steps,
        "edges": sorted([i, j] for i, j in g.edges),
        "rho": rep.rho,
        "epsilon": norm.epsilon,
        "certified_rate": rep.certified_rate,
        "t": norm.t,
        "kappa": norm.kappa,
        "x0": [float(v) for v in x0],
        "step_norms": rep.step_norms,
        "step_ratios": rep.step_ratios,
        "max_ratio": rep.max_ratio,
        "euclidean_norms": rep.euclidean_norms,
        "certified": rep.certified,
    }
    _write(args.output, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    _emit({"output": args.output, "certified": rep.certified, "rho": rep.rho,
           "certified_rate": rep.certified_rate, "max_ratio": rep.max_ratio})
    return EXIT_OK if rep.certified else EXIT_FAILED


def _positive_float(s):
    v = float(s)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not a finite number: {s}")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="contraction-norm", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build and certify the weighted norm of a matrix")
    c.add_argument("--input", required=True)
    c.add_argument("--epsilon", required=True, type=_positive_float)
    c.add_argument("--max-kappa", type=float, default=MAX_KAPPA)
    c.add_argument("--output", required=True)
    c.add_argument("--trials", type=int, default=1000)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="re-verify a certificate against its input matrix")
    v.add_argument("--input", required=True)
    v.add_argument("--certificate", required=True)
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    nm = sub.add_parser("norm", help="evaluate the certified norm on a matrix or vector")
    nm.add_argument("--certificate", required=True)
    what = nm.add_mutually_exclusive_group(required=True)
    what.add_argument("--matrix")
    what.add_argument("--vector")
    nm.set_defaults(func=cmd_norm)

    s = sub.add_parser("spectrum", help="eigenvalues, spectral radius and Gelfand cross-check")
    s.add_argument("--input", required=True)
    s.add_argument("--gelfand-k", type=int, default=7)
    s.set_defaults(func=cmd_spectrum)

    k = sub.add_parser("contract", help="certified consensus run on a random digraph")
    k.add_argument("--nodes", required=True, type=int)
    k.add_argument("--edge-prob", required=True, type=float)
    k.add_argument("--seed", required=True, type=int)
    k.add_argument("--self-weight", type=float, default=DEFAULT_SELF_WEIGHT)
    k.add_argument("--epsilon-fraction", type=float, default=DEFAULT_EPSILON_FRACTION)
    k.add_argument("--steps", required=True, type=int)
    k.add_argument("--output", required=True)
    k.set_defaults(func=cmd_contract)
    return p


def main(argv=None):
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ContractionNormError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT
