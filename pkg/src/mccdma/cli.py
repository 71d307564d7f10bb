"""Command-line front end.

Subcommands mirror the standard experiment designs:

* ``ber-snr``   -- BER versus Eb/N0 for fixed user counts.
* ``ber-users`` -- BER versus number of users at fixed Eb/N0.
* ``mu-sweep``  -- BER versus adaptation step-size.
* ``validate``  -- run the built-in invariant/oracle suite.

Each data subcommand runs every requested combiner on shared per-point
seeds and writes one CSV (``--out -`` for stdout).  Options resolve as
defaults < config file < command-line flags; the config file is plain
``key=value`` lines with ``#`` comments.  Reruns of an identical
configuration are byte-identical.

Exit codes: 0 success, 1 usage or configuration error, 2 I/O error.
"""

import argparse
import os
import sys
from dataclasses import dataclass, fields, replace

from .montecarlo import SimPoint, run_point, sweep

__all__ = ["main", "parse_config", "run_subcommand", "emit_csv", "RunConfig",
           "ConfigError", "CSV_HEADER"]

CSV_HEADER = ("combiner,seq,k_users,n_subcarriers,ebn0_db,fd_tb,mu,symbols,"
              "bit_errors,bits_total,ber,ci95_low,ci95_high,diverged,seed")

_COMMANDS = ("ber-snr", "ber-users", "mu-sweep", "validate")
_ALL_COMBINERS = ("egc", "mrc", "basc")

_USAGE = """usage: mccdma <command> [options]

commands:
  ber-snr      BER vs Eb/N0 sweep          (axis: --ebn0, needs --users)
  ber-users    BER vs number of users      (axis: --users)
  mu-sweep     BER vs BASC step-size       (axis: --mu, needs --users)
  validate     run the self-validation suite

run `mccdma <command> --help` for the option list.
"""


class ConfigError(Exception):
    """Bad flag, bad file value, or missing required option."""


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved experiment configuration."""

    users: tuple[int, ...]
    ebn0: tuple[float, ...]
    mu: tuple[float, ...]
    doppler: float
    channel: str
    seqs: str
    subcarriers: int
    symbols: int
    combiner: tuple[str, ...]
    seed: int
    out: str
    threads: int


def _parse_int_list(text: str, key: str) -> tuple[int, ...]:
    vals = _parse_float_list(text, key)
    out = []
    for v in vals:
        if v != int(v):
            raise ConfigError(f"{key} expects integers, got {v!r}")
        out.append(int(v))
    return tuple(out)


def _parse_float_list(text: str, key: str) -> tuple[float, ...]:
    """Comma lists and inclusive start:step:stop ranges."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ValueError
            start, step, stop = parts
            if step <= 0 or stop < start:
                raise ValueError
            count = int((stop - start) / step + 1e-9) + 1
            return tuple(start + i * step for i in range(count))
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise ConfigError(
            f"{key} expects a number, a comma list, or start:step:stop; got {text!r}"
        ) from None


_DEFAULTS_COMMON = {
    "doppler": 0.003,
    "channel": "jakes",
    "seqs": "walsh",
    "subcarriers": 32,
    "symbols": 10_000,
    "combiner": _ALL_COMBINERS,
    "seed": 12345,
    "out": "-",
    "mu": (0.003,),
}

_DEFAULTS_BY_COMMAND = {
    "ber-snr": {"ebn0": (0.0, 5.0, 10.0, 15.0, 20.0), "users": None},
    "ber-users": {"ebn0": (15.0,), "users": tuple(range(2, 21))},
    "mu-sweep": {
        "ebn0": (20.0,),
        "users": None,
        "mu": (0.003, 0.005, 0.01, 0.015, 0.02, 0.025, 0.03, 0.035, 0.04),
    },
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are exit code 1, not argparse's 2
        raise ConfigError(message)


def _build_parser(command: str) -> _Parser:
    p = _Parser(prog=f"mccdma {command}", add_help=True)
    p.add_argument("--users", help="user counts K (int, list, or a:b:c range)")
    p.add_argument("--ebn0", help="Eb/N0 values in dB (number, list, or a:b:c)")
    p.add_argument("--mu", help="BASC step-size(s)")
    p.add_argument("--doppler", help="normalised Doppler rate fd*Tb")
    p.add_argument("--channel", help="fading model: jakes | iid")
    p.add_argument("--seqs", help="spreading sequences: walsh | gold")
    p.add_argument("--subcarriers", help="spreading length N (power of two)")
    p.add_argument("--symbols", help="symbols per user per point")
    p.add_argument("--combiner", help="egc | mrc | basc | all")
    p.add_argument("--seed", help="master seed (non-negative integer)")
    p.add_argument("--out", help="output CSV path, or - for stdout")
    p.add_argument("--threads", help="worker threads for sweep points")
    p.add_argument("--config", help="key=value configuration file")
    return p


def _parse_config_file(text: str) -> dict:
    values = {}
    known = {f.name for f in fields(RunConfig)}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno} is not key=value: {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in known:
            raise ConfigError(f"unknown configuration key {key!r} (line {lineno})")
        values[key] = value
    return values


def _coerce(key: str, value):
    """Coerce one raw string option to its resolved type."""
    if not isinstance(value, str):
        return value
    try:
        if key == "users":
            return _parse_int_list(value, "--users")
        if key in ("ebn0", "mu"):
            return _parse_float_list(value, f"--{key}")
        if key == "doppler":
            return float(value)
        if key in ("subcarriers", "symbols", "seed", "threads"):
            return int(value)
        if key == "combiner":
            combs = _ALL_COMBINERS if value == "all" else tuple(value.split(","))
            for c in combs:
                if c not in _ALL_COMBINERS:
                    raise ConfigError(f"--combiner: unknown combiner {c!r}")
            return combs
        return value
    except ValueError:
        raise ConfigError(f"--{key}: cannot parse {value!r}") from None


def _default_threads() -> int:
    env = os.environ.get("MCCDMA_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def parse_config(command: str, argv, config_text: str | None = None) -> RunConfig:
    """Resolve flags, optional config file, and defaults into a RunConfig.

    Precedence: command defaults < config file < explicit flags.  Raises
    :class:`ConfigError` naming the offending key on any problem.
    """
    if command not in _COMMANDS or command == "validate":
        raise ConfigError(f"unknown or option-free command {command!r}")
    ns = _build_parser(command).parse_args(list(argv))

    if ns.config is not None:
        try:
            with open(ns.config, "r", encoding="utf-8") as fh:
                config_text = fh.read()
        except OSError as exc:
            raise ConfigError(f"--config: cannot read {ns.config!r}: {exc}") from None
    file_vals = _parse_config_file(config_text) if config_text else {}

    merged = dict(_DEFAULTS_COMMON)
    merged.update(_DEFAULTS_BY_COMMAND[command])
    merged["threads"] = _default_threads()
    merged.update(file_vals)
    for key in merged:
        flag = getattr(ns, key, None)
        if flag is not None:
            merged[key] = flag
    resolved = {k: _coerce(k, v) for k, v in merged.items()}

    if resolved["users"] is None:
        raise ConfigError("missing required value --users")
    cfg = RunConfig(**resolved)
    _validate_config(command, cfg)
    return cfg


def _validate_config(command: str, cfg: RunConfig):
    if cfg.channel not in ("jakes", "iid"):
        raise ConfigError(f"--channel must be jakes or iid, got {cfg.channel!r}")
    if cfg.seqs not in ("walsh", "gold"):
        raise ConfigError(f"--seqs must be walsh or gold, got {cfg.seqs!r}")
    if cfg.seqs == "gold" and cfg.subcarriers != 32:
        raise ConfigError("--seqs gold requires --subcarriers 32")
    if cfg.subcarriers < 2 or cfg.subcarriers > 64 or cfg.subcarriers & (cfg.subcarriers - 1):
        raise ConfigError("--subcarriers must be a power of two in [2, 64]")
    if cfg.symbols < 1:
        raise ConfigError("--symbols must be >= 1")
    if cfg.seed < 0:
        raise ConfigError("--seed must be non-negative")
    if cfg.threads < 1:
        raise ConfigError("--threads must be >= 1")
    if cfg.doppler < 0:
        raise ConfigError("--doppler must be >= 0")
    if any(m <= 0 for m in cfg.mu):
        raise ConfigError("--mu values must be positive")
    if any(k < 1 for k in cfg.users):
        raise ConfigError("--users values must be >= 1")
    max_users = {"walsh": cfg.subcarriers - 1, "gold": 33}[cfg.seqs]
    if any(k > max_users for k in cfg.users):
        raise ConfigError(f"--users exceeds the {cfg.seqs} family size {max_users}")
    scalar_keys = {
        "ber-snr": ("mu",),
        "ber-users": ("mu", "ebn0"),
        "mu-sweep": ("ebn0",),
    }[command]
    for key in scalar_keys:
        if len(getattr(cfg, key)) != 1:
            raise ConfigError(f"--{key} must be a single value for {command}")


def format_config(cfg: RunConfig) -> str:
    """Render a resolved configuration as parse-able key=value lines."""
    def join(vals):
        return ",".join(repr(v) if isinstance(v, float) else str(v) for v in vals)

    lines = []
    for f in fields(RunConfig):
        v = getattr(cfg, f.name)
        lines.append(f"{f.name}={join(v) if isinstance(v, tuple) else v}")
    return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def write_csv(records, fh):
    """Write records to an open text stream in the frozen schema."""
    fh.write(CSV_HEADER + "\n")
    for rec in records:
        p = rec.point
        row = (
            p.combiner, p.seq_kind, str(p.k_users), str(p.n_subcarriers),
            _fmt(p.ebn0_db), _fmt(p.fd_tb), _fmt(p.mu), str(p.n_symbols),
            str(rec.bit_errors), str(rec.bits_total), _fmt(rec.ber),
            _fmt(rec.ci95[0]), _fmt(rec.ci95[1]),
            "true" if rec.diverged else "false", str(p.seed),
        )
        fh.write(",".join(row) + "\n")


def emit_csv(records, path: str):
    """Write one CSV to ``path`` (or stdout for ``-``); OSError propagates."""
    if not records:
        raise ValueError("no records to emit")
    if path == "-":
        write_csv(records, sys.stdout)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_csv(records, fh)


def _experiment_records(command: str, cfg: RunConfig):
    base = SimPoint(
        combiner="egc", seq_kind=cfg.seqs, k_users=cfg.users[0],
        n_subcarriers=cfg.subcarriers, ebn0_db=cfg.ebn0[0], fd_tb=cfg.doppler,
        mu=cfg.mu[0], n_symbols=cfg.symbols, channel_model=cfg.channel,
        seed=cfg.seed,
    )
    records = []
    if command == "ber-snr":
        for k in cfg.users:
            for comb in cfg.combiner:
                records += sweep(replace(base, combiner=comb, k_users=k),
                                 "ebn0", cfg.ebn0, n_jobs=cfg.threads)
    elif command == "ber-users":
        for comb in cfg.combiner:
            records += sweep(replace(base, combiner=comb),
                             "k_users", cfg.users, n_jobs=cfg.threads)
    elif command == "mu-sweep":
        for k in cfg.users:
            for comb in cfg.combiner:
                records += sweep(replace(base, combiner=comb, k_users=k),
                                 "mu", cfg.mu, n_jobs=cfg.threads)
    else:
        raise ConfigError(f"unknown command {command!r}")
    return records


def run_subcommand(command: str, cfg: RunConfig) -> int:
    """Execute one resolved data subcommand; returns the exit code."""
    records = _experiment_records(command, cfg)
    try:
        emit_csv(records, cfg.out)
    except OSError as exc:
        print(f"error: cannot write {cfg.out!r}: {exc}", file=sys.stderr)
        return 2
    return 0


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv or argv[0] in ("-h", "--help"):
        print(_USAGE, end="")
        return 0
    command, rest = argv[0], argv[1:]
    if command not in _COMMANDS:
        print(f"error: unknown command {command!r}\n\n{_USAGE}",
              end="", file=sys.stderr)
        return 1
    if command == "validate":
        if rest:
            print("error: validate takes no options", file=sys.stderr)
            return 1
        from . import validation

        return 0 if validation.run_all() else 1
    try:
        cfg = parse_config(command, rest)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)
    return run_subcommand(command, cfg)


if __name__ == "__main__":
    raise SystemExit(main())
