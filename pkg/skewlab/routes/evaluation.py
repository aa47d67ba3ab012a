from fastapi import APIRouter, HTTPException, status

from skewlab.exceptions import SkewLabError
from skewlab.schemas import EvalRequest, EvalResponse
from skewlab.services.config_format import parse_config
from skewlab.services.tower import eval_expression

router = APIRouter(prefix="/api/eval", tags=["Evaluation"])


@router.post("/", response_model=EvalResponse)
def evaluate_expression(request: EvalRequest):
    """Evaluate an expression in the top ring of a configured tower."""
    try:
        config = parse_config(request.config)
        result = eval_expression(config, request.expression)
    except SkewLabError as exc:
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail=str(exc)
        )
    return EvalResponse(expression=request.expression, result=result)
