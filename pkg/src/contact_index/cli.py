"""Command-line entry point.

Subcommands: germ, character, dh, corollary, verify, calibrate.  All exact
values are serialized as structured text (rationals and cyclotomic terms as
strings) with an approximate decimal annotation for reading; floats are
never parsed back.  Every command except calibrate refuses to run without
the calibration artifact, preventing silent convention drift.

Exit codes: 0 ok, 2 configuration error, 3 unsupported model feature,
4 verification mismatch, 5 calibration failure.
"""

from __future__ import annotations

import datetime
import json
import os
import sys
import tempfile
from fractions import Fraction

import click

from . import oracle
from .catalog import ModelError, load_model
from .deltas import DeltaError, germ_to_document
from .engine import (CalibrationConfig, CalibrationError, EngineError, FitError,
                     UnsupportedModelError, assemble_character, build_preset,
                     calibrate_conventions, character_document, corollary_expand,
                     dh_fourier, germ_at)
from .forms import FormError
from .scalars import ExactScalar, ScalarError, approx_display

EXIT_CONFIG = 2
EXIT_UNSUPPORTED = 3
EXIT_MISMATCH = 4
EXIT_CALIBRATION = 5

DEFAULT_CALIBRATION_FILE = "contact-index-calibration.json"
CALIBRATION_VERSION = 1

PRESET_CHOICES = ("circle", "hopf", "weighted-s3", "prequantum-cpn")
VERIFY_ALL = (
    ("circle", ()),
    ("hopf", (1,)),
    ("hopf", (2,)),
    ("weighted-s3", (1, 2)),
    ("weighted-s3", (2, 3)),
    ("weighted-s3", (3, 4)),
    ("prequantum-cpn", (1,)),
)


class ConfigError(click.ClickException):
    exit_code = EXIT_CONFIG


def _calibration_path():
    return os.environ.get("CONTACT_INDEX_CALIBRATION", DEFAULT_CALIBRATION_FILE)


def _load_calibration():
    path = _calibration_path()
    if not os.path.exists(path):
        raise ConfigError(
            f"calibration file {path!r} not found; run `contact-index calibrate` first")
    try:
        with open(path) as fh:
            doc = json.load(fh)
        return CalibrationConfig.from_dict(doc)
    except (OSError, ValueError, KeyError, EngineError) as exc:
        raise ConfigError(f"unreadable calibration file {path!r}: {exc}")


def _atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".contact-index-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text, out):
    if out:
        _atomic_write(out, text if text.endswith("\n") else text + "\n")
    else:
        click.echo(text)


def _json_text(doc):
    return json.dumps(doc, indent=2, sort_keys=True)


def _stamp(doc):
    doc["generated_at"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return doc


def _resolve_model(preset, n, weights, model_path, calibration):
    given = [x for x in (preset, model_path) if x]
    if len(given) != 1:
        raise ConfigError("give exactly one of --preset or --model")
    if model_path:
        try:
            return load_model(model_path)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot load model {model_path!r}: {exc}")
    try:
        if preset == "circle":
            return build_preset("circle", (), calibration)
        if preset == "hopf":
            if n is None:
                raise ConfigError("--preset hopf needs --n")
            return build_preset("hopf", (int(n),), calibration)
        if preset == "weighted-s3":
            if not weights:
                raise ConfigError("--preset weighted-s3 needs --weights a,b")
            parts = [p.strip() for p in weights.split(",")]
            if len(parts) != 2 or not all(p.lstrip("-").isdigit() for p in parts):
                raise ConfigError(f"--weights must be two integers 'a,b', got {weights!r}")
            return build_preset("weighted-s3", (int(parts[0]), int(parts[1])), calibration)
        if preset == "prequantum-cpn":
            if n is None:
                raise ConfigError("--preset prequantum-cpn needs --n")
            return build_preset("prequantum-cpn", (int(n),), calibration)
    except ModelError as exc:
        raise ConfigError(str(exc))
    raise ConfigError(f"unknown preset {preset!r}")


def _parse_at(text):
    try:
        frac = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"--at must be a fraction p/q, got {text!r}")
    return frac % 1


def _run(body):
    """Map library exceptions onto the documented exit codes."""
    try:
        return body()
    except click.ClickException:
        raise
    except UnsupportedModelError as exc:
        click.echo(f"unsupported: {exc}", err=True)
        sys.exit(EXIT_UNSUPPORTED)
    except CalibrationError as exc:
        click.echo(f"calibration failure: {exc}", err=True)
        sys.exit(EXIT_CALIBRATION)
    except FitError as exc:
        click.echo(f"verification mismatch: {exc}", err=True)
        for r in exc.residuals[:10]:
            click.echo(f"  m={r['m']}: fitted {r['fitted']} != actual {r['actual']}",
                       err=True)
        sys.exit(EXIT_MISMATCH)
    except (ModelError, ScalarError, DeltaError, FormError, EngineError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)


def _model_options(fn):
    fn = click.option("--model", "model_path", type=click.Path(), default=None,
                      help="Path to a model document (exact JSON).")(fn)
    fn = click.option("--weights", default=None, help="Weights 'a,b' for weighted-s3.")(fn)
    fn = click.option("--n", type=int, default=None, help="Dimension parameter for presets.")(fn)
    fn = click.option("--preset", type=click.Choice(PRESET_CHOICES), default=None)(fn)
    return fn


@click.group()
def main():
    """Exact index characters of elliptic contact circle actions."""


@main.command()
@_model_options
@click.option("--at", "at_text", required=True, help="Torsion point p/q.")
@click.option("--out", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json",
              help="Germs are JSON-only.")
@click.option("--digits", type=int, default=4)
def germ(preset, n, weights, model_path, at_text, out, fmt, digits):
    """Germ of the index at one torsion point."""
    def body():
        calibration = _load_calibration()
        model = _resolve_model(preset, n, weights, model_path, calibration)
        at = _parse_at(at_text)
        g = germ_at(model, at, calibration)
        doc = germ_to_document(g, at)
        for term in doc["terms"]:
            term["approx"] = approx_display(ExactScalar.from_text(term["scalar"]), digits)
        report = _stamp({
            "model_id": model.model_id,
            "calibration": calibration.as_dict(),
            "at": f"{at.numerator}/{at.denominator}",
            "germ": doc,
        })
        _emit(_json_text(report), out)
    _run(body)


@main.command()
@_model_options
@click.option("--max-m", type=int, default=50)
@click.option("--out", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--digits", type=int, default=4)
def character(preset, n, weights, model_path, max_m, out, fmt, digits):
    """Fourier coefficients and the quasi-polynomial of the index character."""
    def body():
        calibration = _load_calibration()
        model = _resolve_model(preset, n, weights, model_path, calibration)
        result = assemble_character(model, max_m, calibration)
        if fmt == "csv":
            lines = ["m,value"]
            for m in sorted(result.coefficients):
                c = result.coefficients[m]
                value = str(int(c.rational_value())) if c.is_integer() else c.to_text()
                lines.append(f"{m},{value}")
            _emit("\n".join(lines), out)
        else:
            _emit(_json_text(_stamp(character_document(result, digits))), out)
    _run(body)


@main.command()
@_model_options
@click.option("--out", type=click.Path(), default=None)
@click.option("--digits", type=int, default=4)
def dh(preset, n, weights, model_path, out, digits):
    """The volume transform: the identity germ with the Todd factor dropped."""
    def body():
        calibration = _load_calibration()
        model = _resolve_model(preset, n, weights, model_path, calibration)
        g = dh_fourier(model, calibration)
        doc = germ_to_document(g, Fraction(0))
        report = _stamp({
            "model_id": model.model_id,
            "calibration": calibration.as_dict(),
            "transform": "volume",
            "germ": doc,
        })
        _emit(_json_text(report), out)
    _run(body)


@main.command()
@_model_options
@click.option("--max-m", type=int, default=20)
@click.option("--max-k", type=int, default=20)
@click.option("--out", type=click.Path(), default=None)
def corollary(preset, n, weights, model_path, max_m, max_k, out):
    """Per-index group characters of a rank-2 prequantum model."""
    def body():
        calibration = _load_calibration()
        model = _resolve_model(preset, n, weights, model_path, calibration)
        table = corollary_expand(model, max_m, max_k, calibration)
        report = _stamp({
            "model_id": model.model_id,
            "calibration": calibration.as_dict(),
            "characters": [
                {"m": m, "weights": [{"weight": k, "multiplicity": mult}
                                     for k, mult in sorted(table[m].items())]}
                for m in sorted(table)
            ],
        })
        _emit(_json_text(report), out)
    _run(body)


def _verify_one(kind, params, max_m, max_k, calibration):
    """Engine-versus-oracle diff for one bundled preset.

    Returns the full report document (germs, coefficients, quasi-polynomial)
    with the oracle_match flag and the mismatch list folded in.
    """
    model = build_preset(kind, params, calibration)
    mismatches = []
    if kind == "prequantum-cpn":
        if params != (1,):
            raise UnsupportedModelError(
                "oracle verification of the prequantum model covers n = 1 only")
        table = corollary_expand(model, max_m, max_k, calibration)
        for m in range(-max_m, max_m + 1):
            expected = oracle.equivariant_s2_character(m)
            if table[m] != expected:
                mismatches.append({"m": m, "engine": table[m],
                                   "oracle": expected})
        doc = {
            "model_id": model.model_id,
            "calibration": calibration.as_dict(),
            "characters": [
                {"m": m, "weights": [{"weight": k, "multiplicity": mult}
                                     for k, mult in sorted(table[m].items())]}
                for m in sorted(table)
            ],
        }
    else:
        result = assemble_character(model, max_m, calibration)
        for m in range(-max_m, max_m + 1):
            got = result.coefficients[m]
            want = oracle.oracle_character(kind, params, m)
            if not got.is_integer() or int(got.rational_value()) != want:
                mismatches.append({"m": m, "engine": got.to_text(), "oracle": want})
        doc = character_document(result)
    doc["oracle_match"] = not mismatches
    doc["mismatches"] = mismatches[:10]
    return doc, mismatches


@main.command()
@_model_options
@click.option("--max-m", type=int, default=50)
@click.option("--max-k", type=int, default=60)
@click.option("--all", "run_all", is_flag=True, default=False,
              help="Verify every bundled preset in one invocation.")
@click.option("--out", type=click.Path(), default=None)
def verify(preset, n, weights, model_path, max_m, max_k, run_all, out):
    """Compare engine characters against the brute-force oracle (exit 4 on diff)."""
    def body():
        calibration = _load_calibration()
        if model_path:
            raise UnsupportedModelError(
                "verification needs a bundled preset: user models carry no oracle")
        if run_all:
            targets = VERIFY_ALL
        else:
            if preset is None:
                raise ConfigError("give --preset or --all")
            model = _resolve_model(preset, n, weights, None, calibration)
            if preset == "circle":
                targets = (("circle", ()),)
            elif preset == "hopf":
                targets = (("hopf", (int(n),)),)
            elif preset == "weighted-s3":
                a, b = (int(p) for p in weights.split(","))
                targets = (("weighted-s3", (a, b)),)
            else:
                targets = (("prequantum-cpn", (int(n),)),)
            del model
        report = {"max_m": max_m, "calibration": calibration.as_dict(), "results": []}
        any_mismatch = False
        for kind, params in targets:
            doc, mismatches = _verify_one(kind, params, max_m, max_k, calibration)
            label = doc["model_id"]
            report["results"].append(doc)
            status = "ok" if not mismatches else f"MISMATCH ({len(mismatches)} values)"
            click.echo(f"{label}: {status}")
            for d in mismatches[:10]:
                click.echo(f"  m={d['m']}: engine {d['engine']} oracle {d['oracle']}")
            any_mismatch = any_mismatch or bool(mismatches)
        if out:
            _emit(_json_text(_stamp(report)), out)
        if any_mismatch:
            sys.exit(EXIT_MISMATCH)
    _run(body)


@main.command()
@click.option("--max-m", type=int, default=20)
@click.option("--out", type=click.Path(), default=None,
              help="Calibration file path (default: the standard artifact location).")
@click.option("--perturb-anchors", is_flag=True, default=False, hidden=True)
def calibrate(max_m, out, perturb_anchors):
    """Select and record the unique passing convention combination."""
    def body():
        cfg = calibrate_conventions(max_m=max_m, perturb=perturb_anchors)
        path = out or _calibration_path()
        doc = {"version": CALIBRATION_VERSION, **cfg.as_dict()}
        _atomic_write(path, _json_text(doc) + "\n")
        click.echo(f"calibration: poisson_sign={cfg.poisson_sign} "
                   f"orientation_sign={cfg.orientation_sign} "
                   f"todd_direction={cfg.todd_direction}")
        click.echo(f"written to {path}")
    _run(body)


if __name__ == "__main__":
    main()
