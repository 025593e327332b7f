#!/usr/bin/env python3
"""
FastAPI service for ismcheck
Runs registered property suites and oracle queries over HTTP
"""

import logging
from datetime import datetime
from typing import List, Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from ismcheck import __version__
from ismcheck.config import get_settings
from ismcheck.errors import OracleError, UsageError
from ismcheck.log import setup_logging
from ismcheck.reports import OracleReport, ReportStore, RunReport
from ismcheck.suites import ALL, SUITES, oracle_reports, run_suite

logger = logging.getLogger("ismcheck.api")

app = FastAPI(title="ismcheck API", version=__version__)

# Add CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# Pydantic models
class RunRequest(BaseModel):
    suite: str
    prop: str = ALL
    seed: Optional[int] = None
    tests: Optional[int] = Field(default=None, ge=1)
    depth: Optional[int] = Field(default=None, ge=0)
    save: bool = False


class OracleRequest(BaseModel):
    suite: str
    prop: str = ALL
    depth: Optional[int] = Field(default=None, ge=0)
    tests: int = Field(default=100, ge=0)


@app.get("/")
async def root():
    return {"message": "ismcheck API is running!"}


@app.get("/suites")
async def list_suites():
    """Registered suites with their properties and default bounds"""
    return {
        "suites": [
            {
                "name": name,
                "properties": [
                    {"name": p.name, "bound": p.bound, "max_tests": p.max_tests, "description": p.description}
                    for p in suite.properties
                ],
                "oracle_variants": [variant for variant, _ in suite.oracle_variants],
            }
            for name, suite in SUITES.items()
        ]
    }


@app.post("/run", response_model=List[RunReport])
def run(request: RunRequest):
    """Run a suite's properties"""
    try:
        runs = run_suite(request.suite, request.prop, seed=request.seed, tests=request.tests, depth=request.depth)
    except UsageError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.exception("Run failed")
        raise HTTPException(status_code=500, detail=f"Run failed: {str(e)}")

    reports = [r.report for r in runs]
    if request.save:
        store = ReportStore()
        for report in reports:
            store.save(report)
    return reports


@app.post("/oracle", response_model=List[OracleReport])
def oracle(request: OracleRequest):
    """Exact visit probabilities for a suite's properties"""
    try:
        return oracle_reports(request.suite, request.prop, depth=request.depth, tests=request.tests)
    except (UsageError, OracleError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.exception("Oracle failed")
        raise HTTPException(status_code=500, detail=f"Oracle failed: {str(e)}")


@app.get("/health")
async def health_check():
    """Health check endpoint"""
    return {
        "status": "healthy",
        "timestamp": datetime.now().isoformat(),
        "version": __version__,
        "suites": list(SUITES),
    }


if __name__ == "__main__":
    import uvicorn

    setup_logging(get_settings().log_level)
    uvicorn.run(app, host="0.0.0.0", port=8000)
