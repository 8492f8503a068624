# controllers/hecke/hecke.py
from flask_openapi3 import APIBlueprint, Tag
from pydantic import BaseModel, Field
from typing import Optional, Dict, Any
import logging

from ...addons.errors import LabError
from ...addons.functions import jsonifyFormat, to_jsonable
from ...addons.hecke_calculator import HeckeCalculator

logger = logging.getLogger(__name__)

hecke_bp = APIBlueprint('hecke', __name__, url_prefix='/api/hecke')
hecke_tag = Tag(name="Hecke", description="Double cosets at ramified places")

# ---------------------- QUERY PARAMETER SCHEMAS ---------------------- #
class CosetsQuery(BaseModel):
    p: int = Field(..., description="Prime dividing D")
    D: int = Field(..., description="D with -D a fundamental discriminant")

# ---------------------- RESPONSE SCHEMAS ---------------------- #
class SuccessResponse(BaseModel):
    status: int = Field(200, description="HTTP status code")
    data: Optional[Dict[str, Any]] = Field(None, description="Coset representatives and checks")
    message: str = Field(..., description="Response message")

class ErrorResponse(BaseModel):
    status: int = Field(..., description="HTTP status code")
    success: bool = Field(False, description="Always false")
    error: str = Field(..., description="Error description")
    message: str = Field(..., description="Error message")


@hecke_bp.get(
    '/cosets',
    tags=[hecke_tag],
    responses={200: SuccessResponse, 400: ErrorResponse, 500: ErrorResponse}
)
def get_cosets(query: CosetsQuery):
    """Left coset representatives of K m K / K"""
    try:
        report = HeckeCalculator.cosets_report(query.p, query.D)
        return jsonifyFormat({
            'status': 200,
            'data': to_jsonable(report),
            'message': f"{report['count']} representatives"
        }, 200)

    except LabError as e:
        return jsonifyFormat({
            'status': 400,
            'success': False,
            'error': e.__class__.__name__,
            'message': e.message
        }, 400)
    except Exception as e:
        logger.exception("cosets endpoint failed")
        return jsonifyFormat({
            'status': 500,
            'success': False,
            'error': str(e),
            'message': 'Failed to enumerate cosets'
        }, 500)
