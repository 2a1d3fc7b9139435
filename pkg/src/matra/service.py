"""Read-only HTTP service over one loaded, immutable threat model.

The service exposes the same engine the CLI uses; for any (scenario, source,
configuration) the /assess body is byte-identical to the CLI's JSON output.
The model is loaded once at startup and never mutated, so requests need no
coordination and the service is stateless across requests.

Endpoints:
    GET /model    full document (canonical serialization)
    GET /scenarios scenario listing for pickers
    GET /assess   ?scenario=&source=&controls=a,b,c   ad-hoc control set
                  ?scenario=&source=&config=ID        named configuration
    GET /whatif   ?scenario=&source=&base=ID&alt=ID

Unknown ids yield 404, malformed or semantically invalid queries yield 400;
both carry a machine-readable {"error": {"code", "message"}} body.
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from .errors import MatraError, NoTree, OutOfScope, PathExplosion
from .engine import assess, whatif_diff
from .io import assessment_to_json, serialize_model, whatif_to_json
from .model import ThreatModel

__all__ = ["create_app"]

_JSON = "application/json"


class ErrorInfo(BaseModel):
    code: str
    message: str


class ErrorBody(BaseModel):
    error: ErrorInfo


class ScenarioSummary(BaseModel):
    id: str
    asset: str
    dimensions: list[str]
    description: str
    impact: str
    in_scope_sources: list[str]
    has_tree: bool


def _error(status: int, code: str, message: str) -> JSONResponse:
    body = ErrorBody(error=ErrorInfo(code=code, message=message))
    return JSONResponse(status_code=status, content=body.model_dump())


def _split_controls(raw: str) -> list[str]:
    return [item for item in raw.split(",") if item]


def create_app(model: ThreatModel) -> FastAPI:
    """Build the service around one immutable model."""
    app = FastAPI(title="matra", version="0.1.0", docs_url=None, redoc_url=None)
    serialized = serialize_model(model)

    @app.get("/model")
    def get_model() -> Response:
        return Response(content=serialized, media_type=_JSON)

    @app.get("/scenarios", response_model=list[ScenarioSummary])
    def get_scenarios() -> list[ScenarioSummary]:
        out = []
        for scenario in model.scenarios:
            out.append(
                ScenarioSummary(
                    id=scenario.id,
                    asset=scenario.asset,
                    dimensions=sorted(d.value for d in scenario.dimensions),
                    description=scenario.description,
                    impact=scenario.impact.value,
                    in_scope_sources=[s.id for s in model.scoped_sources(scenario)],
                    has_tree=model.has_tree(scenario.id),
                )
            )
        return out

    @app.get("/assess")
    def get_assess(
        scenario: str = "", source: str = "", controls: str = "", config: str | None = None
    ) -> Response:
        if not scenario or not source:
            return _error(400, "bad-request", "scenario and source are required")
        if config is not None and controls:
            return _error(400, "bad-request", "give either controls or config, not both")
        try:
            if config is not None:
                assessment = assess(model, scenario, source, configuration=config)
            else:
                assessment = assess(model, scenario, source, controls=_split_controls(controls))
        except KeyError as exc:
            return _error(404, "unknown-id", str(exc.args[0]))
        except OutOfScope as exc:
            return _error(400, "out-of-scope", str(exc))
        except NoTree as exc:
            return _error(400, "no-tree", str(exc))
        except PathExplosion as exc:
            return _error(400, "path-explosion", str(exc))
        except MatraError as exc:
            return _error(400, "engine-error", str(exc))
        return Response(content=assessment_to_json(assessment), media_type=_JSON)

    @app.get("/whatif")
    def get_whatif(
        scenario: str = "", source: str = "", base: str = "", alt: str = ""
    ) -> Response:
        if not scenario or not source or not base or not alt:
            return _error(400, "bad-request", "scenario, source, base, and alt are required")
        try:
            diff = whatif_diff(model, scenario, source, base, alt)
        except KeyError as exc:
            return _error(404, "unknown-id", str(exc.args[0]))
        except OutOfScope as exc:
            return _error(400, "out-of-scope", str(exc))
        except NoTree as exc:
            return _error(400, "no-tree", str(exc))
        except MatraError as exc:
            return _error(400, "engine-error", str(exc))
        return Response(content=whatif_to_json(diff), media_type=_JSON)

    return app
