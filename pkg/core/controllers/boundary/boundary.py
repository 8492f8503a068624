# controllers/boundary/boundary.py
from flask_openapi3 import APIBlueprint, Tag
from pydantic import BaseModel, Field
from typing import Optional, List, Dict, Any
import logging

from ...addons.errors import LabError
from ...addons.functions import jsonifyFormat, to_jsonable, parse_elem, parse_generators
from ...addons.boundary_calculator import BoundaryCalculator
from ...models.boundary import DivisorLedger
from ...models.quadfield import Discriminant

logger = logging.getLogger(__name__)

boundary_bp = APIBlueprint('boundary', __name__, url_prefix='/api/boundary')
boundary_tag = Tag(name="Boundary", description="Boundary coordinates and divisor ledgers")

# ---------------------- REQUEST SCHEMAS ---------------------- #
class LedgerEntrySchema(BaseModel):
    curve: str = Field(..., description="Boundary curve label")
    cusp: str = Field(..., description="Cusp label on the curve")
    mult: int = Field(..., description="Multiplicity")
    global_cusp: Optional[str] = Field(None, alias='global', description="Global cusp it maps to")

class PushforwardSchema(BaseModel):
    curve: str = Field(..., description="Boundary curve label")
    cusp: str = Field(..., description="Cusp label on the curve")
    global_cusp: str = Field(..., alias='global', description="Global cusp")

class LedgerSchema(BaseModel):
    entries: List[LedgerEntrySchema] = Field(..., description="Ledger entries")
    pushforward: Optional[List[PushforwardSchema]] = Field(None, description="Pushforward table")

# ---------------------- QUERY PARAMETER SCHEMAS ---------------------- #
class TorsionQuery(BaseModel):
    u: str = Field(..., description="a,b for u = a + b*delta")
    lattice: str = Field(..., description="Generators a,b separated by ';'")
    D: int = Field(3, description="D with -D a fundamental discriminant")

# ---------------------- RESPONSE SCHEMAS ---------------------- #
class SuccessResponse(BaseModel):
    status: int = Field(200, description="HTTP status code")
    data: Optional[Dict[str, Any]] = Field(None, description="Response data")
    message: str = Field(..., description="Response message")

class ErrorResponse(BaseModel):
    status: int = Field(..., description="HTTP status code")
    success: bool = Field(False, description="Always false")
    error: str = Field(..., description="Error description")
    message: str = Field(..., description="Error message")


def lab_error(e):
    return jsonifyFormat({
        'status': 400,
        'success': False,
        'error': e.__class__.__name__,
        'message': e.message
    }, 400)


@boundary_bp.post(
    '/ledger',
    tags=[boundary_tag],
    responses={200: SuccessResponse, 400: ErrorResponse, 500: ErrorResponse}
)
def check_ledger(body: LedgerSchema):
    """Degree zero on every curve and vanishing pushforward"""
    try:
        ledger = DivisorLedger()
        for row in body.pushforward or []:
            ledger.pushforward[(row.curve, row.cusp)] = row.global_cusp
        for entry in body.entries:
            ledger.add(entry.curve, entry.cusp, entry.mult)
            if entry.global_cusp is not None:
                ledger.pushforward[(entry.curve, entry.cusp)] = entry.global_cusp

        report = BoundaryCalculator.ledger_check(ledger)
        report['boundary_divisors'] = BoundaryCalculator.boundary_divisors(ledger)
        return jsonifyFormat({
            'status': 200,
            'data': to_jsonable(report),
            'message': 'Ledger checked'
        }, 200)

    except LabError as e:
        return lab_error(e)
    except Exception as e:
        logger.exception("ledger endpoint failed")
        return jsonifyFormat({
            'status': 500,
            'success': False,
            'error': str(e),
            'message': 'Failed to check the ledger'
        }, 500)


@boundary_bp.get(
    '/torsion',
    tags=[boundary_tag],
    responses={200: SuccessResponse, 400: ErrorResponse, 500: ErrorResponse}
)
def get_torsion(query: TorsionQuery):
    """Order of u in E / L"""
    try:
        Discriminant.of(query.D)
        report = BoundaryCalculator.torsion_report(parse_elem(query.u, query.D),
                                                   parse_generators(query.lattice, query.D), query.D)
        return jsonifyFormat({
            'status': 200,
            'data': to_jsonable(report),
            'message': f"torsion order {report['torsion_order']}"
        }, 200)

    except LabError as e:
        return lab_error(e)
    except ValueError as e:
        return jsonifyFormat({
            'status': 400,
            'success': False,
            'error': 'ValueError',
            'message': str(e)
        }, 400)
    except Exception as e:
        logger.exception("torsion endpoint failed")
        return jsonifyFormat({
            'status': 500,
            'success': False,
            'error': str(e),
            'message': 'Failed to compute the torsion order'
        }, 500)
