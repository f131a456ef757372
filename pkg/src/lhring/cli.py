"""Command-line front end.

    lhring spectrum  [--e0 --v0 --big-n --two-n]
    lhring entangle  [--l]
    lhring jc        [--nu --delta|--nu0 --g --n-max --photon-n --t-max --t-steps]
    lhring verify

Every command accepts ``--format {csv,json}``, ``--out PATH`` and
``--config PATH``. Values are resolved as flags > config file > defaults.
Exit codes: 0 success, 1 validation error, 2 numerical failure, 3 I/O error.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import entanglement as ent
from . import jc
from . import ring
from . import verify
from .linalg import NumericalError
from .states import admissible_l

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3

# V0 for which 2 V0 (1 - cos(pi/8)) = 422 cm^-1
DEFAULT_V0 = 422.0 / (2.0 * (1.0 - math.cos(math.pi / 8)))


@dataclass(frozen=True)
class RunConfig:
    e0: float = 0.0
    v0: float = DEFAULT_V0
    big_n: int = 8
    two_n: int = 4
    l: int | None = None
    nu: float = 1.0
    nu0: float | None = None
    delta: float = 0.0
    g: float = 1.0
    n_max: int = jc.DEFAULT_N_MAX
    photon_n: int = 0
    t_max: float = 20.0
    t_steps: int = 401
    format: str = "csv"
    out: str | None = None
    perturb_v: float = 0.0

    def ring_params(self) -> ring.RingParams:
        return ring.RingParams(E0=self.e0, V0=self.v0, N=self.big_n, two_n=self.two_n)

    def jc_params(self) -> jc.JCParams:
        delta = self.delta
        if self.nu0 is not None:
            delta = jc.detuning_from_frequencies(self.nu0, self.nu)
        return jc.JCParams(nu=self.nu, delta=delta, g=self.g, n_max=self.n_max)


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, raw):
    kind = _FIELD_TYPES[key]
    if raw is None or (isinstance(raw, str) and raw.strip().lower() in ("", "none")):
        return None
    if "int" in kind:
        return int(raw)
    if "float" in kind:
        return float(raw)
    return str(raw)


def read_config_file(path: str) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment, keys match the long flags."""
    text = Path(path).read_text()
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    parser.read_string("[lhring]\n" + text)
    out = {}
    for key, raw in parser["lhring"].items():
        name = key.replace("-", "_")
        if name not in _FIELD_TYPES:
            raise ValueError(f"unknown config key {key!r} in {path}")
        out[name] = _coerce(name, raw)
    return out


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config:
        values.update(read_config_file(args.config))
    for name in _FIELD_TYPES:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    if "nu0" in values and values.get("nu0") is not None and getattr(args, "delta", None) is not None:
        raise ValueError("give either --delta or --nu0, not both")
    cfg = replace(RunConfig(), **values)
    if cfg.format not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {cfg.format!r}")
    if cfg.t_steps < 2:
        raise ValueError("t_steps must be >= 2")
    return cfg


def fmt(x) -> str:
    """Nine significant digits, locale independent, no negative zero."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    s = format(x, ".9g")
    return "0" if s in ("-0", "0") else s


def _json_num(x):
    # JSON keeps full double precision; only CSV is rounded to 9 digits
    x = float(x)
    if not math.isfinite(x):
        return None
    return x + 0.0


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _config_echo(cfg: RunConfig) -> dict:
    return {k: v for k, v in asdict(cfg).items() if k not in ("out", "format")}


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


# commands


def spectrum_tables(cfg: RunConfig):
    p = cfg.ring_params()
    c = ring.ring_constants(p)
    excitons = ring.exciton_spectrum(p)
    lattice = ring.lattice_spectrum(p.two_n, c)
    gap = ring.level_gap(p)
    extra = ring.extra_level_locator(p)
    return excitons, lattice, gap, extra


def cmd_spectrum(cfg: RunConfig) -> str:
    excitons, lattice, gap, extra = spectrum_tables(cfg)
    if cfg.format == "json":
        return _json_text({
            "config": _config_echo(cfg),
            "exciton": [{"n": n, "energy_cm1": _json_num(e)} for n, e in excitons],
            "lattice": [{"l": l, "energy_cm1": _json_num(e)} for l, e in lattice],
            "gap_cm1": _json_num(gap),
            "extra_level": {
                "energy_cm1": _json_num(extra.energy),
                "continuous_index": _json_num(extra.continuous_index),
                "integer_solutions": list(extra.integer_solutions),
                "between": [extra.lower_neighbor, extra.upper_neighbor],
            },
        })
    rows = [("exciton", f"E_{n}", fmt(e)) for n, e in excitons]
    rows += [("lattice", f"E_{l}^H", fmt(e)) for l, e in lattice]
    rows.append(("gap", "2V0(1-cos(pi/N))", fmt(gap)))
    rows.append(("extra_level", "E_0^H", fmt(extra.energy)))
    rows.append(("extra_level", "continuous_index", fmt(extra.continuous_index)))
    return _csv_text(["kind", "label", "energy_cm1"], rows)


def entangle_rows(cfg: RunConfig):
    window = list(admissible_l(cfg.two_n))
    if cfg.l is not None and cfg.l not in window:
        raise ValueError(f"l={cfg.l} outside {window} for two_n={cfg.two_n}")
    ls = [cfg.l] if cfg.l is not None else window
    return [(l, step) for l in ls for step in ent.entropy_cascade(l, cfg.two_n)]


def cmd_entangle(cfg: RunConfig) -> str:
    rows = entangle_rows(cfg)
    if cfg.format == "json":
        return _json_text({
            "config": _config_echo(cfg),
            "cascade": [
                {"l": l, "split": s.split, "lambdas": [_json_num(x) for x in s.lambdas],
                 "entropy_bits": _json_num(s.entropy)}
                for l, s in rows
            ],
        })
    return _csv_text(
        ["l", "split", "lambdas", "entropy_bits"],
        [(l, s.split, ", ".join(fmt(x) for x in s.lambdas), fmt(s.entropy)) for l, s in rows],
    )


def jc_tables(cfg: RunConfig):
    p = cfg.jc_params()
    dressed = []
    for n in range(p.n_max - 1):
        for sign in ("plus", "minus"):
            ds = jc.dressed_state(p, n, sign)
            dressed.append((n, sign, ds.beta, ds.energy, jc.jc_entropy(p, n, sign)))
    t = np.linspace(0.0, cfg.t_max, cfg.t_steps)
    series = jc.rabi_evolution(p, cfg.photon_n, t)
    return dressed, series


def cmd_jc(cfg: RunConfig) -> tuple[str, str | None]:
    """Returns (dressed table, series table); JSON puts both in the first."""
    dressed, series = jc_tables(cfg)
    if cfg.format == "json":
        return _json_text({
            "config": _config_echo(cfg),
            "dressed": [
                {"n": n, "sign": s, "beta": _json_num(b), "energy": _json_num(e), "entropy_bits": _json_num(h)}
                for n, s, b, e, h in dressed
            ],
            "series": {
                "photon_n": cfg.photon_n,
                "t": [_json_num(x) for x in series.t],
                "p_excited": [_json_num(x) for x in series.p_excited],
            },
        }), None
    d = _csv_text(["n", "sign", "beta", "energy", "entropy_bits"],
                  [(n, s, fmt(b), fmt(e), fmt(h)) for n, s, b, e, h in dressed])
    s = _csv_text(["t", "p_excited"], [(fmt(t), fmt(x)) for t, x in zip(series.t, series.p_excited)])
    return d, s


def series_path(out: str) -> str:
    p = Path(out)
    return str(p.with_name(f"{p.stem}_series{p.suffix}"))


def cmd_verify(cfg: RunConfig) -> tuple[str, bool, list]:
    vcfg = verify.VerifyConfig(
        ring=cfg.ring_params(), jc=cfg.jc_params(), photon_n=cfg.photon_n, perturb_v=cfg.perturb_v,
    )
    results = verify.run_suites(vcfg)
    rep = verify.report(results)
    for s in rep["suites"]:
        s.pop("seconds")
        s["measured"] = _json_num(s["measured"]) if math.isfinite(s["measured"]) else "inf"
    rep["config"] = _config_echo(cfg)
    return _json_text(rep), rep["passed"], results


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="flat key = value file")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", metavar="PATH", default=None)
    g = common.add_argument_group("ring")
    g.add_argument("--e0", type=float, help="single-site excitation energy E0 (cm^-1)")
    g.add_argument("--v0", type=float, help="neighbour interaction V0 (cm^-1)")
    g.add_argument("--big-n", dest="big_n", type=int, help="exciton index bound N")
    g.add_argument("--two-n", dest="two_n", type=int, help="number of qubits in the loop")
    g.add_argument("--l", type=int, help="phase label of the eigenstate (default: all)")
    g.add_argument("--perturb-v", dest="perturb_v", type=float, help=argparse.SUPPRESS)
    f = common.add_argument_group("field")
    f.add_argument("--nu", type=float, help="field frequency")
    f.add_argument("--delta", type=float, help="detuning")
    f.add_argument("--nu0", type=float, help="lattice frequency; sets delta = pi (nu0 - nu)")
    f.add_argument("--g", type=float, help="coupling constant")
    f.add_argument("--n-max", dest="n_max", type=int, help="Fock truncation")
    f.add_argument("--photon-n", dest="photon_n", type=int, help="start the series in |n+1, 0>")
    f.add_argument("--t-max", dest="t_max", type=float)
    f.add_argument("--t-steps", dest="t_steps", type=int)

    parser = argparse.ArgumentParser(prog="lhring", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="exciton and lattice energies")
    sub.add_parser("entangle", parents=[common], help="entropy cascade of the ring eigenstates")
    sub.add_parser("jc", parents=[common], help="dressed states and Rabi series")
    sub.add_parser("verify", parents=[common], help="run the invariant suites")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.command == "spectrum":
            _write(cmd_spectrum(cfg), cfg.out)
        elif args.command == "entangle":
            _write(cmd_entangle(cfg), cfg.out)
        elif args.command == "jc":
            dressed, series = cmd_jc(cfg)
            if series is None:
                _write(dressed, cfg.out)
            elif cfg.out is None:
                _write(dressed + "\n" + series, None)
            else:
                _write(dressed, cfg.out)
                _write(series, series_path(cfg.out))
        elif args.command == "verify":
            text, passed, results = cmd_verify(cfg)
            for r in results:
                mark = "PASS" if r.passed else "FAIL"
                print(f"{mark} {r.name:42s} {r.measured:.3e} <= {r.tolerance:.1e}  {r.detail}", file=sys.stderr)
            _write(text, cfg.out)
            return EXIT_OK if passed else EXIT_NUMERICAL
    except NumericalError as exc:
        print(f"lhring: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, configparser.Error) as exc:
        print(f"lhring: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"lhring: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())


_NUM = {"type": ["number", "null"]}

SPECTRUM_SCHEMA = {
    "type": "object",
    "required": ["config", "exciton", "lattice", "gap_cm1", "extra_level"],
    "properties": {
        "exciton": {"type": "array", "items": {
            "type": "object", "required": ["n", "energy_cm1"],
            "properties": {"n": {"type": "integer"}, "energy_cm1": _NUM}}},
        "lattice": {"type": "array", "items": {
            "type": "object", "required": ["l", "energy_cm1"],
            "properties": {"l": {"type": "integer"}, "energy_cm1": _NUM}}},
        "gap_cm1": _NUM,
        "extra_level": {"type": "object", "required": ["energy_cm1", "continuous_index", "integer_solutions"]},
    },
}

ENTANGLE_SCHEMA = {
    "type": "object",
    "required": ["config", "cascade"],
    "properties": {"cascade": {"type": "array", "items": {
        "type": "object", "required": ["l", "split", "lambdas", "entropy_bits"],
        "properties": {"l": {"type": "integer"}, "split": {"type": "string"},
                       "lambdas": {"type": "array", "items": _NUM}, "entropy_bits": _NUM}}}},
}

JC_SCHEMA = {
    "type": "object",
    "required": ["config", "dressed", "series"],
    "properties": {
        "dressed": {"type": "array", "items": {
            "type": "object", "required": ["n", "sign", "beta", "energy", "entropy_bits"],
            "properties": {"n": {"type": "integer"}, "sign": {"enum": ["plus", "minus"]},
                           "beta": _NUM, "energy": _NUM, "entropy_bits": _NUM}}},
        "series": {"type": "object", "required": ["t", "p_excited"]},
    },
}

VERIFY_SCHEMA = {
    "type": "object",
    "required": ["passed", "suites"],
    "properties": {
        "passed": {"type": "boolean"},
        "suites": {"type": "array", "items": {
            "type": "object", "required": ["name", "passed", "measured", "tolerance", "detail"]}},
    },
}
