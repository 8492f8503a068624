# controllers/verify/verify.py
from flask_openapi3 import APIBlueprint, Tag
from pydantic import BaseModel, Field
from typing import Optional, Dict, Any
import logging

from ...addons.errors import LabError
from ...addons.extensions import MINIMUM_ORDERS, RunConfig
from ...addons.functions import jsonifyFormat, rows_to_csv, to_jsonable
from ...addons.verification_suites import CSV_COLUMNS, VerificationSuites

logger = logging.getLogger(__name__)

verify_bp = APIBlueprint('verify', __name__, url_prefix='/api/verify')
verify_tag = Tag(name="Verification", description="Acceptance suites with per-test pass/fail records")

# ---------------------- PATH PARAMETER SCHEMAS ---------------------- #
class SuitePath(BaseModel):
    suite: str = Field(..., description="Suite name or 'all'")

# ---------------------- QUERY PARAMETER SCHEMAS ---------------------- #
class VerifyQuery(BaseModel):
    precision: Optional[int] = Field(None, description="Working precision in decimal digits")
    order: Optional[int] = Field(None, description="Series order for every local identity")
    seed: Optional[int] = Field(None, description="Seed of the randomized property checks")
    format: Optional[str] = Field('json', description="json or csv")

# ---------------------- RESPONSE SCHEMAS ---------------------- #
class SuccessResponse(BaseModel):
    status: int = Field(200, description="HTTP status code")
    data: Optional[Dict[str, Any]] = Field(None, description="Suite summary")
    passed: bool = Field(..., description="Whether every check passed")
    message: str = Field(..., description="Response message")

class ErrorResponse(BaseModel):
    status: int = Field(..., description="HTTP status code")
    success: bool = Field(False, description="Always false")
    error: str = Field(..., description="Error description")
    message: str = Field(..., description="Error message")


@verify_bp.get(
    '/<suite>',
    tags=[verify_tag],
    responses={200: SuccessResponse, 400: ErrorResponse, 500: ErrorResponse}
)
def run_suite(path: SuitePath, query: VerifyQuery):
    """Run one suite (or all) and return its records"""
    try:
        orders = {} if query.order is None else {key: query.order for key in MINIMUM_ORDERS}
        config = RunConfig.load(precision=query.precision, seed=query.seed, format=query.format,
                                log_file='', out='', **orders)
        summary = VerificationSuites.run(config, [path.suite])

        if config.format == 'csv':
            return jsonifyFormat({
                'status': 200,
                'data': rows_to_csv(VerificationSuites.flatten(summary), CSV_COLUMNS),
                'config': to_jsonable(summary['config']),
                'format': 'csv',
                'passed': summary['passed'],
                'message': 'Suite finished'
            }, 200)

        return jsonifyFormat({
            'status': 200,
            'data': to_jsonable(summary),
            'passed': summary['passed'],
            'message': 'Suite finished'
        }, 200)

    except LabError as e:
        return jsonifyFormat({
            'status': 400,
            'success': False,
            'error': e.__class__.__name__,
            'message': e.message
        }, 400)
    except Exception as e:
        logger.exception("verify endpoint failed")
        return jsonifyFormat({
            'status': 500,
            'success': False,
            'error': str(e),
            'message': 'Failed to run the suite'
        }, 500)
