# controllers/assemble/assemble.py
from flask_openapi3 import APIBlueprint, Tag
from pydantic import BaseModel, Field
from typing import Optional, Dict, Any
import logging

from ...addons.errors import LabError
from ...addons.functions import jsonifyFormat, to_jsonable, parse_list
from ...addons.analytic_calculator import AnalyticCalculator
from ...models.analytic import DEFAULT_PRECISION
from ...models.quadfield import Discriminant

logger = logging.getLogger(__name__)

assemble_bp = APIBlueprint('assemble', __name__, url_prefix='/api/assemble')
assemble_tag = Tag(name="Assembly", description="Right hand side of the period formula at s = 0")

# ---------------------- QUERY PARAMETER SCHEMAS ---------------------- #
class AssembleQuery(BaseModel):
    D: int = Field(..., description="D with -D a fundamental discriminant")
    alpha: str = Field('', description="Comma separated alpha_p values")
    lprime: str = Field(..., description="L'(0)")
    whittaker: str = Field('1', description="Global Whittaker constant")
    completed: bool = Field(False, description="Keep the printed constant form")
    check: bool = Field(False, description="Compare with the archimedean factor at small s")
    precision: int = Field(DEFAULT_PRECISION, ge=15, description="Working precision in decimal digits")

# ---------------------- RESPONSE SCHEMAS ---------------------- #
class SuccessResponse(BaseModel):
    status: int = Field(200, description="HTTP status code")
    data: Optional[Dict[str, Any]] = Field(None, description="Assembled value")
    message: str = Field(..., description="Response message")

class ErrorResponse(BaseModel):
    status: int = Field(..., description="HTTP status code")
    success: bool = Field(False, description="Always false")
    error: str = Field(..., description="Error description")
    message: str = Field(..., description="Error message")


@assemble_bp.get(
    '',
    tags=[assemble_tag],
    responses={200: SuccessResponse, 400: ErrorResponse, 500: ErrorResponse}
)
def get_assembly(query: AssembleQuery):
    """W I_inf prod(1 - alpha_p) L'(0) with the Gamma factors resolved"""
    try:
        Discriminant.of(query.D)
        alphas = parse_list(query.alpha)
        value = AnalyticCalculator.assemble_rhs(query.D, alphas, query.lprime, query.whittaker,
                                                query.completed, query.precision)
        data = {'D': query.D, 'alphas': alphas, 'lprime': query.lprime, 'whittaker': query.whittaker,
                'completed': query.completed, 'value': value}
        if query.check:
            data['limit_check'] = AnalyticCalculator.assemble_limit_check(
                query.D, alphas, query.lprime, query.whittaker, precision=query.precision)
        return jsonifyFormat({
            'status': 200,
            'data': to_jsonable(data),
            'message': 'Assembled'
        }, 200)

    except (LabError, ValueError) as e:
        return jsonifyFormat({
            'status': 400,
            'success': False,
            'error': e.__class__.__name__,
            'message': getattr(e, 'message', str(e))
        }, 400)
    except Exception as e:
        logger.exception("assemble endpoint failed")
        return jsonifyFormat({
            'status': 500,
            'success': False,
            'error': str(e),
            'message': 'Failed to assemble'
        }, 500)
