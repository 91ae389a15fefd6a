"""Serializers for variation runs: CSV pitch matrix, JSON report, ABC and MIDI."""

from __future__ import annotations

import csv
import io
import json
import struct

from .diophantine import DiophantineReport
from .harmonic import SmallDivisorReport
from .melody import PitchRow, RunConfig, StageSummary, VariationRun

TICKS_PER_QUARTER = 480
TEMPO_US_PER_QUARTER = 500_000  # 120 bpm
VELOCITY = 80
DEFAULT_TONIC = 60

SHARP_NAMES = ("C", "^C", "D", "^D", "E", "F", "^F", "G", "^G", "A", "^A", "B")


# -- CSV ---------------------------------------------------------------------

def emit_csv(run: VariationRun) -> str:
    n = run.config.n
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["stage"] + [f"k{k}" for k in range(n)])
    for row in run.rows:
        writer.writerow([row.stage, *row.pitches])
    return buf.getvalue()


def parse_csv(text: str) -> list:
    """Inverse of :func:`emit_csv`: ``[(stage, [p0, p1, ...]), ...]``."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if not header or header[0] != "stage":
        raise ValueError("not a pitch matrix: header must start with 'stage'")
    width = len(header) - 1
    out = []
    for line in reader:
        if not line:
            continue
        if len(line) != width + 1:
            raise ValueError(f"row {line[0]!r} has {len(line) - 1} pitches, expected {width}")
        out.append((int(line[0]), [int(v) for v in line[1:]]))
    return out


def csv_from_rows(rows: list) -> str:
    width = len(rows[0][1]) if rows else 0
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["stage"] + [f"k{k}" for k in range(width)])
    for stage, pitches in rows:
        writer.writerow([stage, *pitches])
    return buf.getvalue()


# -- JSON --------------------------------------------------------------------

def _pairs(values):
    return [[c.real, c.imag] for c in values]


def report_dict(run: VariationRun) -> dict:
    cfg = run.config
    dio = run.diophantine
    sd = run.small_divisors
    return {
        "config": {
            "alpha": cfg.alpha,
            "alpha_value": cfg.alpha_value,
            "epsilon": cfg.epsilon,
            "n": cfg.n,
            "M": cfg.M,
            "S": cfg.S,
            "N": cfg.N,
            "divisions": cfg.divisions,
            "x0": cfg.x0,
            "divisor_floor": cfg.divisor_floor,
            "tolerance": cfg.tolerance,
            "allow_folds": cfg.allow_folds,
            "rotation_iterations": cfg.rotation_iterations,
        },
        "rows": [
            {"stage": r.stage, "pitches": list(r.pitches), "raw": list(r.raw), "near_edge": list(r.near_edge)}
            for r in run.rows
        ],
        "stages": [
            {
                "index": s.index,
                "residual_before": s.residual_before,
                "residual_after": s.residual_after,
                "eta_mean": s.eta_mean,
                "min_derivative": s.min_derivative,
                "folded": s.folded,
                "rotation_number": s.rotation_number,
                "h_coeffs": _pairs(s.h_coeffs),
            }
            for s in run.stages
        ],
        "small_divisors": {
            "alpha": sd.alpha,
            "magnitudes": list(sd.magnitudes),
            "min_divisor": sd.min_divisor,
            "flagged": list(sd.flagged),
            "floor": sd.floor,
        },
        "diophantine": {
            "alpha": dio.alpha,
            "partial_quotients": list(dio.partial_quotients),
            "convergents": [list(c) for c in dio.convergents],
            "worst_quality": dio.worst_quality,
            "empirical_nu": dio.empirical_nu,
            "known_bound": dio.known_bound,
        },
        "converged_at": run.converged_at,
    }


def emit_json(run: VariationRun) -> str:
    # repr-based float output is the shortest string that round-trips exactly
    return json.dumps(report_dict(run), indent=2, allow_nan=False) + "\n"


def load_json(text: str) -> VariationRun:
    data = json.loads(text)
    c = dict(data["config"])
    c.pop("alpha_value", None)
    config = RunConfig(**c)
    rows = tuple(
        PitchRow(r["stage"], tuple(r["pitches"]), tuple(r["raw"]), tuple(r["near_edge"]))
        for r in data["rows"]
    )
    stages = tuple(
        StageSummary(
            index=s["index"],
            residual_before=s["residual_before"],
            residual_after=s["residual_after"],
            eta_mean=s["eta_mean"],
            min_derivative=s["min_derivative"],
            folded=s["folded"],
            rotation_number=s["rotation_number"],
            h_coeffs=tuple(complex(re, im) for re, im in s["h_coeffs"]),
        )
        for s in data["stages"]
    )
    sd = data["small_divisors"]
    dio = data["diophantine"]
    return VariationRun(
        config=config,
        rows=rows,
        stages=stages,
        diophantine=DiophantineReport(
            alpha=dio["alpha"],
            partial_quotients=tuple(dio["partial_quotients"]),
            convergents=tuple(tuple(p) for p in dio["convergents"]),
            worst_quality=dio["worst_quality"],
            empirical_nu=dio["empirical_nu"],
            known_bound=dio["known_bound"],
        ),
        small_divisors=SmallDivisorReport(
            sd["alpha"], tuple(sd["magnitudes"]), sd["min_divisor"], tuple(sd["flagged"]), sd["floor"]
        ),
        converged_at=data["converged_at"],
    )


# -- ABC ---------------------------------------------------------------------

def abc_note(key: int) -> str:
    """Spell a MIDI key with sharps; middle C (60) is ``C``."""
    name = SHARP_NAMES[key % 12]
    octave = key // 12 - 1
    if octave >= 5:
        return name.lower() + "'" * (octave - 5)
    return name + "," * (4 - octave)


def emit_abc(run: VariationRun, tonic: int = DEFAULT_TONIC) -> str:
    """One tune, all stages in order, a barline between consecutive stages."""
    cfg = run.config
    groups = [" ".join(abc_note(tonic + p) for p in row.pitches) for row in run.rows]
    header = [
        "X:1",
        f"T:KAM variations alpha={cfg.alpha} epsilon={cfg.epsilon}",
        "M:none",
        "L:1/4",
        "Q:1/4=120",
        "K:C",
    ]
    return "\n".join(header) + "\n" + " | ".join(groups) + " |]\n"


# -- MIDI --------------------------------------------------------------------

def _vlq(value: int) -> bytes:
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append(0x80 | (value & 0x7F))
        value >>= 7
    return bytes(reversed(out))


def emit_midi(run: VariationRun, stage: int = 0, tonic: int = DEFAULT_TONIC) -> bytes:
    """Format-0 standard MIDI file of one stage: quarter notes at 120 bpm on channel 0."""
    if not 0 <= stage < len(run.rows):
        raise ValueError(f"stage must be in [0, {len(run.rows) - 1}], got {stage}")
    keys = [tonic + p for p in run.rows[stage].pitches]
    if any(not 0 <= k <= 127 for k in keys):
        raise ValueError(f"tonic {tonic} puts notes outside the MIDI key range")

    track = bytearray()
    track += b"\x00\xff\x51\x03" + TEMPO_US_PER_QUARTER.to_bytes(3, "big")
    for key in keys:
        track += b"\x00" + bytes((0x90, key, VELOCITY))
        track += _vlq(TICKS_PER_QUARTER) + bytes((0x80, key, 0))
    track += b"\x00\xff\x2f\x00"

    header = b"MThd" + struct.pack(">IHHH", 6, 0, 1, TICKS_PER_QUARTER)
    return header + b"MTrk" + struct.pack(">I", len(track)) + bytes(track)
