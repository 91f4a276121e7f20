"""Command-line front end: simulations, sweeps, and the verification suite.

Every record-producing subcommand emits the same CSV schema

    m,r,channel,decoder,trials,errors,p_hat,ci_low,ci_high,seed,wall_ms

and derives all randomness from a master seed plus stable trial
indices, so a fixed configuration reproduces its output bytes exactly,
regardless of thread count.  wall_ms is 0 unless --timing is passed,
keeping the default output deterministic.

Exit codes: 0 success, 1 failed verification, 2 parameter error,
3 feasibility-guard error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import bounds as bounds_mod
from . import channels as channels_mod
from . import decoders, fourier_lab, reconstruct, sunflower
from .channels import BmsChannel, bms_transmit, bsc_transmit, capacity, parse_channel, quantize
from .decoders import ErrorEstimate
from .errors import FeasibilityError, ParameterError
from .rm_core import CoeffVector, RmCode, Word, encode, mobius, random_codeword
from .seeding import derive_rng, fresh_master

__all__ = ["main", "ExperimentConfig", "SimRecord", "run", "CSV_FIELDS"]

CSV_FIELDS = (
    "m",
    "r",
    "channel",
    "decoder",
    "trials",
    "errors",
    "p_hat",
    "ci_low",
    "ci_high",
    "seed",
    "wall_ms",
)


@dataclass(frozen=True)
class SimRecord:
    m: int
    r: int
    channel: str
    decoder: str
    trials: float
    errors: float
    p_hat: float
    ci_low: float
    ci_high: float
    seed: int
    wall_ms: int

    def row(self) -> List[str]:
        return [
            str(self.m),
            str(self.r),
            self.channel,
            self.decoder,
            _fmt_count(self.trials),
            _fmt_count(self.errors),
            repr(self.p_hat),
            repr(self.ci_low),
            repr(self.ci_high),
            str(self.seed),
            str(self.wall_ms),
        ]

    @classmethod
    def from_row(cls, row: Dict[str, str]) -> "SimRecord":
        return cls(
            m=int(row["m"]),
            r=int(row["r"]),
            channel=row["channel"],
            decoder=row["decoder"],
            trials=float(row["trials"]),
            errors=float(row["errors"]),
            p_hat=float(row["p_hat"]),
            ci_low=float(row["ci_low"]),
            ci_high=float(row["ci_high"]),
            seed=int(row["seed"]),
            wall_ms=int(row["wall_ms"]),
        )


def _fmt_count(x: float) -> str:
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def records_to_csv(records: Sequence[SimRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for rec in records:
        writer.writerow(rec.row())
    return buf.getvalue()


def _write_text(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a record-producing run depends on; same config, same bytes."""

    subcommand: str
    m: int
    r: int
    channel: str
    decoder: str = "exit"
    trials: int = 0
    seed: int = 0
    mode: str = "exact"
    threads: int = 1
    m_under: int = 0
    m_over: int = 0
    b: Optional[int] = None
    rounds: int = 1
    timing: bool = False
    out: Optional[str] = None
    eps_grid: Tuple[float, ...] = field(default_factory=tuple)


def _estimate_record(
    config: ExperimentConfig,
    m: int,
    channel_text: str,
    decoder: str,
    est: ErrorEstimate,
    wall_ms: int,
) -> SimRecord:
    return SimRecord(
        m=m,
        r=config.r,
        channel=channel_text,
        decoder=decoder,
        trials=est.trials,
        errors=est.errors,
        p_hat=est.p_hat,
        ci_low=est.ci_low,
        ci_high=est.ci_high,
        seed=config.seed,
        wall_ms=wall_ms,
    )


def _single_eps(channel: BmsChannel) -> float:
    if len(channel.components) != 1:
        raise ParameterError("this experiment needs a single-rate channel")
    return channel.components[0][1]


def _clock(config: ExperimentConfig, start: float) -> int:
    if not config.timing:
        return 0
    return int((time.monotonic() - start) * 1000)


def run(config: ExperimentConfig) -> List[SimRecord]:
    """Execute a record-producing experiment (exit-error, boost, converse)."""
    if config.subcommand == "exit-error":
        return _run_exit_error(config)
    if config.subcommand == "boost":
        return _run_boost(config)
    if config.subcommand == "converse":
        return _run_converse(config)
    raise ParameterError(f"run() does not handle subcommand {config.subcommand!r}")


def _run_exit_error(config: ExperimentConfig) -> List[SimRecord]:
    code = RmCode(config.m, config.r)
    if config.eps_grid:
        channel_texts = [f"bsc:{e:g}" for e in config.eps_grid]
    else:
        channel_texts = [config.channel]
    decoder_names = ["exit", "full"] if config.decoder == "both" else [config.decoder]
    records = []
    for text in channel_texts:
        channel = parse_channel(text)
        for name in decoder_names:
            start = time.monotonic()
            est = _estimate(code, channel, name, config)
            records.append(
                _estimate_record(config, config.m, text, name, est, _clock(config, start))
            )
    return records


def _estimate(
    code: RmCode, channel: BmsChannel, decoder: str, config: ExperimentConfig
) -> ErrorEstimate:
    if decoder not in ("exit", "full"):
        raise ParameterError(f"unknown decoder {decoder!r}; use exit, full, or both")
    multi = len(channel.components) > 1
    if multi:
        if config.mode == "exact":
            raise ParameterError("exact mode needs a single-rate channel")
        if decoder != "exit":
            raise ParameterError("mixture channels only support the exit decoder")
        return decoders.bms_exit_error(
            code, channel, config.trials, config.seed, config.threads
        )
    eps = channel.components[0][1]
    fn = decoders.exit_error if decoder == "exit" else decoders.full_bit_error
    return fn(
        code,
        eps,
        mode=config.mode,
        trials=config.trials or None,
        seed=config.seed,
        threads=config.threads,
    )


def _run_boost(config: ExperimentConfig) -> List[SimRecord]:
    channel = parse_channel(config.channel)
    eps = _single_eps(channel)
    if not 0.0 < eps < 0.5:
        raise ParameterError(f"boosting needs eps in (0, 1/2), got {eps}")
    k = config.m - config.m_under
    gap = config.m_over - config.m - k
    if k < 1 or gap < 0:
        raise ParameterError(
            f"schedule ({config.m_under}, {config.m}, {config.m_over}) needs "
            "m_under < m and m_over >= 2m - m_under"
        )
    if config.trials < 1:
        raise ParameterError("boost needs a positive trial count")
    ambient = config.m + config.rounds * (k + gap)
    zero = Word(ambient, 0)
    start = time.monotonic()

    def one(i: int) -> int:
        rng = derive_rng(config.seed, i)
        noisy = bsc_transmit(zero, eps, rng)
        dec = sunflower.boost_schedule_decode(
            noisy, config.m, config.r, k, gap, config.rounds, eps, b=config.b, seed=rng
        )
        return int(dec.value != 0)

    errors = _sum_trials(one, config.trials, config.threads)
    lo, hi = decoders.wilson_interval(errors, config.trials)
    est = ErrorEstimate(
        trials=float(config.trials),
        errors=float(errors),
        p_hat=errors / config.trials,
        ci_low=lo,
        ci_high=hi,
    )
    return [
        _estimate_record(
            config, ambient, config.channel, "boost", est, _clock(config, start)
        )
    ]


_TRIAL_CHUNK = 1024


def _sum_trials(one: Callable[[int], int], trials: int, threads: int) -> int:
    spans = [(lo, min(lo + _TRIAL_CHUNK, trials)) for lo in range(0, trials, _TRIAL_CHUNK)]

    def chunk(span: Tuple[int, int]) -> int:
        return sum(one(i) for i in range(span[0], span[1]))

    if threads <= 1:
        return sum(chunk(s) for s in spans)
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(chunk, spans))


def _run_converse(config: ExperimentConfig) -> List[SimRecord]:
    code = RmCode(config.m, config.r)
    channel = parse_channel(config.channel)
    eps = _single_eps(channel)
    gap = bounds_mod.capacity_gap(code, channel)
    if gap >= 0:
        raise ParameterError(
            f"converse experiment needs rate above capacity; gap is {gap:+.4f}"
        )
    if config.trials < 1:
        raise ParameterError("converse needs a positive trial count")
    records = []
    for name, fn in (("exit", decoders.exit_error), ("full", decoders.full_bit_error)):
        start = time.monotonic()
        est = fn(
            code,
            eps,
            mode="montecarlo",
            trials=config.trials,
            seed=config.seed,
            threads=config.threads,
        )
        records.append(
            _estimate_record(config, config.m, config.channel, name, est, _clock(config, start))
        )
    return records


# ---------------------------------------------------------------------------
# Subcommand handlers


def _cmd_encode(args: argparse.Namespace) -> int:
    code = RmCode(args.m, args.r)
    if args.message is not None:
        ndig = ((code.n - 1) >> 2) + 1
        if len(args.message) != ndig:
            raise ParameterError(
                f"message hex for m={code.m} needs {ndig} digits, got {len(args.message)}"
            )
        coeffs = 0
        for k, ch in enumerate(args.message.lower()):
            try:
                coeffs |= int(ch, 16) << (4 * k)
            except ValueError:
                raise ParameterError(f"bad hex digit {ch!r}") from None
        message = CoeffVector(code.m, coeffs)
        word = encode(code, message)
    elif args.random:
        word = random_codeword(code, args.seed)
        message = mobius(word)
    else:
        raise ParameterError("encode needs --message HEX or --random")
    payload = {
        "m": code.m,
        "r": code.r,
        "message": message.to_hex(),
        "codeword": word.to_hex(),
    }
    _write_text(args.out, json.dumps(payload) + "\n")
    return 0


def _cmd_transmit(args: argparse.Namespace) -> int:
    channel = parse_channel(args.channel)
    if args.word is not None:
        word = Word.from_hex(args.m, args.word)
    elif args.random_codeword:
        if args.r is None:
            raise ParameterError("--random-codeword needs --r")
        word = random_codeword(RmCode(args.m, args.r), args.seed)
    else:
        raise ParameterError("transmit needs --word HEX or --random-codeword")
    payload: Dict[str, object] = {
        "m": args.m,
        "channel": args.channel,
        "input": word.to_hex(),
    }
    if len(channel.components) == 1:
        out = bsc_transmit(word, channel.components[0][1], args.seed)
        payload["output"] = out.to_hex()
    else:
        obs = bms_transmit(word, channel, args.seed)
        payload["output"] = obs.bits.to_hex()
        payload["eps"] = list(obs.eps)
    _write_text(args.out, json.dumps(payload) + "\n")
    return 0


def _config_from_args(args: argparse.Namespace, subcommand: str) -> ExperimentConfig:
    grid: Tuple[float, ...] = ()
    if getattr(args, "eps_grid", None):
        try:
            grid = tuple(float(part) for part in args.eps_grid.split(","))
        except ValueError as exc:
            raise ParameterError(f"bad --eps-grid: {exc}") from None
    return ExperimentConfig(
        subcommand=subcommand,
        m=args.m,
        r=args.r,
        channel=getattr(args, "channel", "bsc:0.1"),
        decoder=getattr(args, "decoder", "exit"),
        trials=getattr(args, "trials", 0) or 0,
        seed=fresh_master(args.seed),
        mode=getattr(args, "mode", "exact"),
        threads=getattr(args, "threads", 1),
        m_under=getattr(args, "m_under", 0),
        m_over=getattr(args, "m_over", 0),
        b=getattr(args, "b", None),
        rounds=getattr(args, "rounds", 1),
        timing=getattr(args, "timing", False),
        out=args.out,
        eps_grid=grid,
    )


def _cmd_exit_error(args: argparse.Namespace) -> int:
    mode = {"mc": "montecarlo"}.get(args.mode, args.mode)
    config = replace(_config_from_args(args, "exit-error"), mode=mode)
    records = run(config)
    _write_text(config.out, records_to_csv(records))
    return 0


def _cmd_boost(args: argparse.Namespace) -> int:
    config = _config_from_args(args, "boost")
    records = run(config)
    _write_text(config.out, records_to_csv(records))
    return 0


def _cmd_converse(args: argparse.Namespace) -> int:
    config = _config_from_args(args, "converse")
    records = run(config)
    _write_text(config.out, records_to_csv(records))
    return 0


def _cmd_sunflower(args: argparse.Namespace) -> int:
    sf = sunflower.build_sunflower(args.m_under, args.m, args.m_over)
    ok = sunflower.verify_sunflower(sf)
    lines = [
        "kernel: " + " ".join(f"{v:x}" for v in sf.kernel.basis),
    ]
    for i, petal in enumerate(sf.petals):
        lines.append(f"petal {i}: " + " ".join(f"{v:x}" for v in petal.basis))
    lines.append(f"petals: {sf.size}")
    lines.append(f"verified: {'true' if ok else 'false'}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0 if ok else 1


def _reconstruct_records(args: argparse.Namespace, grid: bool) -> str:
    code = RmCode(args.m, args.r)
    channel = parse_channel(args.channel)
    eps = _single_eps(channel)
    master = fresh_master(args.seed)
    trials = args.trials
    if trials < 1:
        raise ParameterError("reconstruction needs a positive trial count")
    lines = []
    for i in range(trials):
        rng = derive_rng(master, i)
        truth = random_codeword(code, rng)
        noisy = bsc_transmit(truth, eps, rng)
        if grid:
            res = reconstruct.rm_reconstruct_grid(
                code, noisy, eps, c=args.c, c_prime=args.c_prime, seed=rng
            )
        else:
            res = reconstruct.rm_reconstruct(
                code, noisy, eps, c=args.c, radius=args.radius, seed=rng
            )
        record = {
            "m": code.m,
            "r": code.r,
            "eps": eps,
            "seed": master,
            "radius_effective": res.radius,
            "recovered": res.word.bits == truth.bits,
            "hamming_to_truth": res.word.distance(truth),
        }
        lines.append(json.dumps(record))
    return "\n".join(lines) + "\n"


def _cmd_reconstruct(args: argparse.Namespace) -> int:
    _write_text(args.out, _reconstruct_records(args, grid=False))
    return 0


def _cmd_grid_reconstruct(args: argparse.Namespace) -> int:
    _write_text(args.out, _reconstruct_records(args, grid=True))
    return 0


def _fourier_csv(code: RmCode, m_under: int, eps: float) -> str:
    table = decoders.conditional_table(code, m_under, eps)
    ft = fourier_lab.transform(table, eps)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["subset_mask", "dim", "coefficient"])
    for mask in range(len(ft.coeffs)):
        writer.writerow([mask, fourier_lab.subset_dim(mask), repr(float(ft.coeffs[mask]))])
    return buf.getvalue()


def _cmd_fourier(args: argparse.Namespace) -> int:
    _write_text(args.out, _fourier_csv(RmCode(args.m, args.r), args.m_under, args.eps))
    return 0


_BOUND_PARAM_FLAGS = ("p_e", "k", "gap", "eps", "m", "r", "l", "l_min", "d", "rate_gap")


def _cmd_bounds(args: argparse.Namespace) -> int:
    params = {}
    for name in _BOUND_PARAM_FLAGS:
        value = getattr(args, name)
        if value is not None:
            params[name] = value
    report = bounds_mod.evaluate(args.name, **params)
    text = repr(report.value) + "\n"
    if args.out:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["name", "value", "log2_domain"])
        writer.writerow([report.name, repr(report.value), str(report.log2_domain).lower()])
        _write_text(args.out, buf.getvalue())
    sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# Verification suite


def _verify_checks() -> List[Tuple[str, bool]]:
    checks: List[Tuple[str, bool]] = []

    def add(name: str, fn: Callable[[], bool]) -> None:
        try:
            checks.append((name, bool(fn())))
        except Exception:
            checks.append((name, False))

    def roundtrip() -> bool:
        code = RmCode(3, 2)
        word = random_codeword(code, 7)
        return encode(code, mobius(word)).bits == word.bits

    add("encode-mobius-roundtrip", roundtrip)

    add(
        "exit-error-rm20-exact",
        lambda: abs(decoders.exit_error(RmCode(2, 0), 0.1).p_hat - 0.028) <= 1e-12,
    )
    add(
        "exit-error-rm11-half",
        lambda: decoders.exit_error(RmCode(1, 1), 0.1).p_hat == 0.5,
    )

    def quantized_q() -> bool:
        q = decoders.q_table(RmCode(3, 1), 0.1)
        return bool(np.all(np.isin(q, (0.0, 0.5, 1.0))))

    add("q-values-quantized-rm31", quantized_q)

    def parseval() -> bool:
        q = decoders.q_table(RmCode(3, 1), 0.1)
        ft = fourier_lab.transform(q, 0.1)
        lhs = float(np.sum(ft.coeffs ** 2))
        rhs = fourier_lab.biased_inner(q, q, 0.1)
        return abs(lhs - rhs) <= 1e-9

    add("parseval-rm31", parseval)

    def vanishing() -> bool:
        q = decoders.q_table(RmCode(3, 1), 0.1)
        ft = fourier_lab.transform(q, 0.1)
        masks = np.arange(len(ft.coeffs))
        with_zero = (masks & 1).astype(bool)
        return float(np.max(np.abs(ft.coeffs[with_zero]))) <= 1e-9

    add("vanishing-coefficients-rm31", vanishing)

    add(
        "restriction-identity-rm31",
        lambda: fourier_lab.restriction_identity_check(RmCode(3, 1), 1, 0.1) <= 1e-9,
    )

    def sunflower_235() -> bool:
        sf = sunflower.build_sunflower(2, 3, 5)
        return sf.size == 4 and sunflower.verify_sunflower(sf)

    add("sunflower-2-3-5", sunflower_235)

    def quantize_capacity() -> bool:
        ch = parse_channel("bms:0.4@0.02,0.6@0.11")
        return capacity(quantize(ch, 8)) <= capacity(ch) + 1e-12

    add("quantize-capacity-monotone", quantize_capacity)

    def bms_matches_bsc() -> bool:
        code = RmCode(2, 1)
        eps = 0.1
        for z in range(16):
            word = Word(2, z)
            obs = channels_mod.BmsObservation(word, (eps,) * 4)
            a = decoders.exit_bit_map(code, word, eps, seed=0)
            b = decoders.bms_exit_bit_map(code, obs, seed=0)
            if (a.value, a.tie) != (b.value, b.tie):
                return False
        return True

    add("bms-single-rate-matches-bsc", bms_matches_bsc)

    def wilson_brackets() -> bool:
        lo, hi = decoders.wilson_interval(3, 100)
        return lo <= 0.03 <= hi

    add("wilson-interval-brackets", wilson_brackets)

    def determinism() -> bool:
        base = dict(
            subcommand="exit-error",
            m=3,
            r=1,
            channel="bsc:0.1",
            decoder="exit",
            trials=256,
            seed=11,
            mode="montecarlo",
        )
        one = records_to_csv(run(ExperimentConfig(**base, threads=1)))
        four = records_to_csv(run(ExperimentConfig(**base, threads=4)))
        return one == four

    add("mc-thread-determinism", determinism)

    return checks


def _verify_sweep_csv() -> str:
    """The standing example sweep: three rates, exit and full, exact mode."""
    config = ExperimentConfig(
        subcommand="exit-error",
        m=3,
        r=1,
        channel="bsc:0.1",
        decoder="both",
        seed=1,
        mode="exact",
        eps_grid=(0.05, 0.1, 0.2),
    )
    return records_to_csv(run(config))


def _cmd_verify(args: argparse.Namespace) -> int:
    checks = _verify_checks()
    failed = 0
    for name, ok in checks:
        print(("PASS " if ok else "FAIL ") + name)
        failed += 0 if ok else 1
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    if args.out_dir is not None:
        os.makedirs(args.out_dir, exist_ok=True)
        with open(os.path.join(args.out_dir, "exit_error_sweep.csv"), "w", encoding="utf-8") as fh:
            fh.write(_verify_sweep_csv())
        with open(os.path.join(args.out_dir, "fourier_rm31.csv"), "w", encoding="utf-8") as fh:
            fh.write(_fourier_csv(RmCode(3, 1), 2, 0.1))
    return 0 if failed == 0 else 1


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rmboost",
        description="Reed-Muller codes on symmetric channels: exact decoding, "
        "boosting, reconstruction, spectra, and bounds.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def out_flag(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", default=None, help="output file (default: stdout)")

    p = sub.add_parser("encode", help="evaluate a message polynomial")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--message", default=None, help="coefficient hex, low nibbles first")
    p.add_argument("--random", action="store_true", help="draw a uniform codeword")
    p.add_argument("--seed", type=int, default=None)
    out_flag(p)
    p.set_defaults(handler=_cmd_encode)

    p = sub.add_parser("transmit", help="send a word through a channel")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--word", default=None, help="word hex, low nibbles first")
    p.add_argument("--random-codeword", action="store_true")
    p.add_argument("--channel", required=True, help="bsc:EPS or bms:P@E,P@E,...")
    p.add_argument("--seed", type=int, default=None)
    out_flag(p)
    p.set_defaults(handler=_cmd_transmit)

    p = sub.add_parser("exit-error", help="coordinate-0 decision error rate")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--channel", default="bsc:0.1")
    p.add_argument("--eps-grid", default=None, help="comma-separated BSC rates to sweep")
    p.add_argument("--decoder", choices=("exit", "full", "both"), default="exit")
    p.add_argument("--mode", choices=("exact", "mc", "montecarlo"), default="exact")
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="record real wall_ms")
    out_flag(p)
    p.set_defaults(handler=_cmd_exit_error)

    p = sub.add_parser("boost", help="sunflower majority boosting error rate")
    p.add_argument("--m-under", dest="m_under", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--m-over", dest="m_over", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--channel", default="bsc:0.1")
    p.add_argument("--b", type=int, default=None, help="petal count (default: all)")
    p.add_argument("--rounds", type=int, default=1)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--timing", action="store_true")
    out_flag(p)
    p.set_defaults(handler=_cmd_boost)

    p = sub.add_parser("sunflower", help="build and verify a subspace sunflower")
    p.add_argument("--m-under", dest="m_under", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--m-over", dest="m_over", type=int, required=True)
    out_flag(p)
    p.set_defaults(handler=_cmd_sunflower)

    p = sub.add_parser("reconstruct", help="list-decode random codewords")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--channel", default="bsc:0.05")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--radius", type=int, default=None, help="override the radius formula")
    out_flag(p)
    p.set_defaults(handler=_cmd_reconstruct)

    p = sub.add_parser("grid-reconstruct", help="slice-grid reconstruction")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--channel", default="bsc:0.05")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--c-prime", dest="c_prime", type=float, default=1.0)
    out_flag(p)
    p.set_defaults(handler=_cmd_grid_reconstruct)

    p = sub.add_parser("fourier", help="character spectrum of a conditional error table")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--m-under", dest="m_under", type=int, required=True)
    out_flag(p)
    p.set_defaults(handler=_cmd_fourier)

    p = sub.add_parser("bounds", help="evaluate a named closed-form bound")
    p.add_argument("--name", required=True)
    p.add_argument("--p-e", dest="p_e", type=float, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--gap", type=int, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--l-min", dest="l_min", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--rate-gap", dest="rate_gap", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=_cmd_bounds)

    p = sub.add_parser("converse", help="above-capacity accuracy measurement")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--channel", required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--timing", action="store_true")
    out_flag(p)
    p.set_defaults(handler=_cmd_converse)

    p = sub.add_parser("verify", help="run the fast invariant suite")
    p.add_argument("--out-dir", dest="out_dir", default=None,
                   help="also write the standing sweep and spectrum CSVs here")
    p.set_defaults(handler=_cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FeasibilityError as exc:
        print(f"feasibility: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
