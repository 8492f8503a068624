from fractions import Fraction
from pathlib import Path
import csv, io, json
import math

from flask import make_response, jsonify
from mpmath import mpc, mpf, nstr

from ..models.quadfield import FieldElem, Matrix3E
from ..models.symlaurent import LaurentPoly, RatFunc, PowerSeries


# CONVERT RESPONSE TO JSON
def jsonifyFormat(responsedata, status_code):
    if isinstance(responsedata, dict):
        responsedata = jsonify(responsedata)

    response = make_response(responsedata)
    response.status_code = status_code
    response.headers['Content-Type'] = 'application/json'

    return response


def _number(value, digits):
    if isinstance(value, mpc):
        if value.imag == 0:
            return nstr(value.real, digits)
        return {'re': nstr(value.real, digits), 'im': nstr(value.imag, digits)}
    if isinstance(value, complex):
        return {'re': repr(value.real), 'im': repr(value.imag)}
    return nstr(value, digits)


# EXACT AND HIGH PRECISION VALUES TO JSON
def to_jsonable(value, digits=20):
    """Fractions as 'num/den', mpmath numbers as decimal strings, lab types through their to_dict"""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return value if math.isfinite(value) else str(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (mpf, mpc, complex)):
        return _number(value, digits)
    if isinstance(value, (LaurentPoly, PowerSeries)):
        return str(value)
    if isinstance(value, (RatFunc, FieldElem, Matrix3E)) or hasattr(value, 'to_dict'):
        return to_jsonable(value.to_dict(), digits)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple, set)):
        return [to_jsonable(v, digits) for v in value]
    return str(value)


def dumps(value, digits=20):
    return json.dumps(to_jsonable(value, digits), indent=2, sort_keys=False)


def parse_fraction(text):
    """'3/4', '-2', '0.25' to Fraction"""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"cannot read {text!r} as a rational number")


def parse_list(text, cast=str):
    if text is None:
        return []
    if isinstance(text, (list, tuple)):
        return [cast(x) for x in text]
    return [cast(x.strip()) for x in str(text).split(',') if x.strip()]


# CSV EXPORT
def rows_to_csv(rows, columns, digits=20):
    output = io.StringIO()
    writer = csv.writer(output)
    writer.writerow(columns)
    for row in rows:
        cells = []
        for column in columns:
            cell = to_jsonable(row.get(column), digits)
            cells.append(json.dumps(cell) if isinstance(cell, (dict, list)) else ('' if cell is None else cell))
        writer.writerow(cells)
    return output.getvalue()


def write_artifact(out_dir, name, text):
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    target = path / name
    target.write_text(text)
    return target


def parse_elem(text, D):
    """'a,b' is a + b*delta; a single number is rational"""
    parts = parse_list(text)
    if len(parts) == 1:
        return FieldElem(parse_fraction(parts[0]), 0, D)
    if len(parts) == 2:
        return FieldElem(parse_fraction(parts[0]), parse_fraction(parts[1]), D)
    raise ValueError(f"cannot read {text!r} as an element a,b of E")


def parse_generators(text, D):
    """Generators 'a,b' separated by ';'"""
    return [parse_elem(g, D) for g in str(text).split(';') if g.strip()]
