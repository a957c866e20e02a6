"""JSON and CSV renderings of analysis results.  Floats are printed with a fixed digit count."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import fields, is_dataclass

import mpmath

from .constants import AsymptoticConstants, Estimate
from .da import DAResult, SurveyResult
from .floatseq import FloatSeq

DIGITS = 15


def fmt(x, digits: int = DIGITS):
    if x is None:
        return None
    if isinstance(x, (int, str, bool)):
        return x
    if isinstance(x, mpmath.mpc) or isinstance(x, complex):
        x = mpmath.mpc(x)
        if x.imag == 0:
            return mpmath.nstr(x.real, digits, strip_zeros=False, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)
        return {"re": fmt(x.real, digits), "im": fmt(x.imag, digits)}
    return mpmath.nstr(mpmath.mpf(x), digits, strip_zeros=False)


def estimate_json(e: Estimate | None, digits: int = DIGITS):
    if e is None:
        return None
    return {"value": fmt(e.value, digits), "error": fmt(e.error, 3)}


def constants_json(c: AsymptoticConstants, digits: int = DIGITS) -> dict:
    out = {}
    for f in fields(c):
        v = getattr(c, f.name)
        if f.name == "extra":
            out["extra"] = {k: estimate_json(e, digits) for k, e in sorted(v.items())}
        else:
            out[f.name] = estimate_json(v, digits)
    return out


def fit_json(fit: DAResult, digits: int = DIGITS) -> dict:
    return {
        "order": fit.order,
        "degrees": list(fit.degrees),
        "terms_used": fit.terms_used,
        "residual_rank_info": fit.residual_rank_info,
        "singularities": [{"location": fmt(s.location, digits), "exponent": fmt(s.exponent, digits),
                           "multiplicity": s.multiplicity} for s in fit.singularities],
    }


def survey_json(s: SurveyResult, digits: int = DIGITS, *, include_fits: bool = False) -> dict:
    out = {
        "t_c": fmt(s.location, digits),
        "t_c_spread": fmt(s.location_spread, 3),
        "share": round(s.share, 4),
        "fits": len(s.fits),
        "defective": [list(d) for d in s.defective],
        "exponents": [{"value": fmt(g.value, digits), "spread": fmt(g.spread, 3), "share": round(g.share, 4),
                       "samples": g.samples} for g in s.exponents],
        "per_fit": [{"degrees": list(d), "groups": [{"location": fmt(c, digits), "roots": m,
                                                     "exponents": [fmt(v, digits) for v in e]} for c, m, e in g]}
                    for d, g in s.per_fit],
    }
    if include_fits:
        out["fit_details"] = [fit_json(f, digits) for f in s.fits]
    return out


def survey_csv(s: SurveyResult, digits: int = DIGITS) -> str:
    """One row per root of Q_M in every fit."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["degrees", "re_location", "im_location", "exponent", "multiplicity"])
    for fit in s.fits:
        for sg in fit.singularities:
            z = mpmath.mpc(sg.location)
            e = sg.exponent
            w.writerow([" ".join(map(str, fit.degrees)), fmt(z.real, digits), fmt(z.imag, digits),
                        "" if e is None else fmt(mpmath.re(e), digits), sg.multiplicity])
    return buf.getvalue()


def sequence_csv(seq: FloatSeq, digits: int = DIGITS, header=("n", "value")) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for n, v in zip(seq.indices, seq.values):
        w.writerow([n, "" if v is None else fmt(v, digits)])
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"
