"""Command-line entry point: ``kamvar --alpha e --epsilon 0.5 --length 10 --variations 1``."""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

from .circlemap import resolve_alpha
from .formats import DEFAULT_TONIC, csv_from_rows, emit_abc, emit_csv, emit_json, emit_midi
from .melody import RunAborted, RunConfig, run

log = logging.getLogger("kamvar")

FORMATS = ("csv", "json", "abc", "midi")


@dataclass
class Options:
    formats: tuple
    out: str = None
    tonic: int = DEFAULT_TONIC
    midi_stage: int = None
    verbose: bool = False


def _alpha(text):
    try:
        resolve_alpha(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return text.strip().lower() if text.strip().lower() in ("e", "pi", "phi") else float(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="kamvar",
        description="Melody variations from the KAM Newton iteration on Arnold circle maps.",
    )
    p.add_argument("--alpha", type=_alpha, default="e", help="rotation offset: decimal or e|pi|phi (default e)")
    p.add_argument("--epsilon", type=float, default=0.5, help="perturbation amplitude, 0 < epsilon < 1")
    p.add_argument("--length", type=int, default=10, help="notes per melody (default 10)")
    p.add_argument("--variations", type=int, default=1, help="number of variations M (default 1)")
    p.add_argument("--samples", type=int, default=64, help="samples S per Fourier estimate (default 64)")
    p.add_argument("--modes", type=int, default=10, help="Fourier modes N kept (default 10)")
    p.add_argument("--divisions", type=int, default=12, help="equal divisions of the octave (default 12)")
    p.add_argument("--x0", type=float, default=0.0, help="orbit seed (default 0)")
    p.add_argument("--divisor-floor", type=float, default=1e-8, help="smallest admissible small divisor")
    p.add_argument("--tolerance", type=float, default=1e-12, help="root-solve tolerance for H(x) = u")
    p.add_argument("--allow-folds", action="store_true",
                   help="keep going when a change of variables is not monotone (local roots)")
    p.add_argument("--format", dest="formats", action="append", choices=FORMATS,
                   help="output format, repeatable (default csv)")
    p.add_argument("--out", help="path prefix for output files; text formats go to stdout without it")
    p.add_argument("--tonic", type=int, default=DEFAULT_TONIC, help="MIDI key of pitch 0 (default 60)")
    p.add_argument("--midi-stage", type=int, help="write only this stage as MIDI (default: every stage)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def parse_args(argv=None):
    """Return ``(RunConfig, Options)``; exits with a usage message on invalid input."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        config = RunConfig(
            alpha=ns.alpha,
            epsilon=ns.epsilon,
            n=ns.length,
            M=ns.variations,
            S=ns.samples,
            N=ns.modes,
            divisions=ns.divisions,
            x0=ns.x0,
            divisor_floor=ns.divisor_floor,
            tolerance=ns.tolerance,
            allow_folds=ns.allow_folds,
        )
    except ValueError as exc:
        parser.error(str(exc))
    formats = tuple(dict.fromkeys(ns.formats or ["csv"]))
    if "midi" in formats and not ns.out:
        parser.error("--format midi needs --out")
    if not 0 <= ns.tonic <= 127:
        parser.error("--tonic must be a MIDI key in [0, 127]")
    if ns.midi_stage is not None and not 0 <= ns.midi_stage <= config.M:
        parser.error(f"--midi-stage must be in [0, {config.M}]")
    return config, Options(formats, ns.out, ns.tonic, ns.midi_stage, ns.verbose)


def write_outputs(result, opts: Options, stdout=None):
    stdout = stdout or sys.stdout
    texts = {
        "csv": lambda: emit_csv(result),
        "json": lambda: emit_json(result),
        "abc": lambda: emit_abc(result, opts.tonic),
    }
    written = []
    for fmt in opts.formats:
        if fmt == "midi":
            stages = [opts.midi_stage] if opts.midi_stage is not None else range(len(result.rows))
            for s in stages:
                path = Path(f"{opts.out}.stage{s}.mid")
                path.write_bytes(emit_midi(result, s, opts.tonic))
                written.append(path)
        elif opts.out:
            path = Path(f"{opts.out}.{fmt}")
            path.write_text(texts[fmt]())
            written.append(path)
        else:
            stdout.write(texts[fmt]())
    return written


def main(argv=None) -> int:
    config, opts = parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if opts.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)
    with warnings.catch_warnings():
        warnings.simplefilter("always")
        try:
            result = run(config, on_row=lambda r: log.info("stage %d: %s", r.stage, list(r.pitches)))
        except RunAborted as exc:
            print(f"kamvar: {exc}", file=sys.stderr)
            print("rows computed before the failure:", file=sys.stderr)
            sys.stderr.write(csv_from_rows([(r.stage, list(r.pitches)) for r in exc.rows]))
            return 1
    for path in write_outputs(result, opts):
        log.info("wrote %s", path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
