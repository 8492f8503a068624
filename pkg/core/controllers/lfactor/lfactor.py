# controllers/lfactor/lfactor.py
from flask_openapi3 import APIBlueprint, Tag
from pydantic import BaseModel, Field
from typing import Optional, Dict, Any, Literal
import logging

from ...addons.errors import LabError
from ...addons.functions import jsonifyFormat, to_jsonable
from ...addons.localzeta_calculator import LocalZetaCalculator
from ...models.satake import SatakeData

logger = logging.getLogger(__name__)

lfactor_bp = APIBlueprint('lfactor', __name__, url_prefix='/api/lfactor')
lfactor_tag = Tag(name="L-factors", description="Standard local L-factors from Satake data")

# ---------------------- QUERY PARAMETER SCHEMAS ---------------------- #
class LFactorQuery(BaseModel):
    place: Literal['inert', 'split', 'ramified'] = Field(..., description="Place variant")
    satake: str = Field('', description="Assignments like 'a=2, n1=3'; missing parameters stay symbolic")
    strict: bool = Field(False, description="Eliminate one parameter through the central character")
    order: Optional[int] = Field(None, ge=1, description="Order of the series check")

# ---------------------- RESPONSE SCHEMAS ---------------------- #
class SuccessResponse(BaseModel):
    status: int = Field(200, description="HTTP status code")
    data: Optional[Dict[str, Any]] = Field(None, description="place, factor and series_check")
    message: str = Field(..., description="Response message")

class ErrorResponse(BaseModel):
    status: int = Field(..., description="HTTP status code")
    success: bool = Field(False, description="Always false")
    error: str = Field(..., description="Error description")
    message: str = Field(..., description="Error message")


@lfactor_bp.get(
    '',
    tags=[lfactor_tag],
    responses={200: SuccessResponse, 400: ErrorResponse, 500: ErrorResponse}
)
def get_lfactor(query: LFactorQuery):
    """L-factor as a rational function in X = p^-s with its series check"""
    try:
        data = SatakeData.from_text(query.place, query.satake, strict=query.strict)
        report = LocalZetaCalculator.place_report(data, query.order)
        return jsonifyFormat({
            'status': 200,
            'data': to_jsonable(report),
            'message': 'L-factor computed'
        }, 200)

    except (LabError, ValueError) as e:
        return jsonifyFormat({
            'status': 400,
            'success': False,
            'error': e.__class__.__name__,
            'message': getattr(e, 'message', str(e))
        }, 400)
    except Exception as e:
        logger.exception("lfactor endpoint failed")
        return jsonifyFormat({
            'status': 500,
            'success': False,
            'error': str(e),
            'message': 'Failed to compute the L-factor'
        }, 500)
