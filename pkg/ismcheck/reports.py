"""
Report schemas and the SQLite report store
"""

import logging
import os
import sqlite3
from datetime import datetime
from typing import List, Literal, Optional

from pydantic import BaseModel, model_validator

from ismcheck.config import get_settings

logger = logging.getLogger(__name__)


class RunReport(BaseModel):
    suite: str
    property: str
    seed: int
    tests: int
    verdict: Literal["passed", "falsified", "exhausted"]
    counterexample: Optional[str] = None
    elapsed_ms: float
    test_index: Optional[int] = None

    @model_validator(mode="after")
    def _falsified_has_counterexample(self) -> "RunReport":
        if self.verdict == "falsified" and not self.counterexample:
            raise ValueError("a falsified report must carry its counterexample")
        return self


class OracleReport(BaseModel):
    suite: str
    property: str
    variant: str
    depth: int
    tests: int
    visit_probability: str
    visit_approx: float
    counterexample_probability: str
    counterexample_approx: float
    falsification_chance: float


class ReportStore:
    """Persists run reports in a local SQLite database"""

    def __init__(self, db_path: Optional[str] = None):
        self.db_path = db_path or get_settings().db_path

    def get_db_connection(self) -> sqlite3.Connection:
        directory = os.path.dirname(self.db_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        conn = sqlite3.connect(self.db_path)
        conn.execute("""
            CREATE TABLE IF NOT EXISTS run_reports (
                id INTEGER PRIMARY KEY,
                suite TEXT,
                property TEXT,
                seed TEXT,
                tests INTEGER,
                verdict TEXT,
                counterexample TEXT,
                elapsed_ms REAL,
                test_index INTEGER,
                created_at TEXT
            )
        """)
        return conn

    def save(self, report: RunReport) -> int:
        conn = self.get_db_connection()
        try:
            cursor = conn.cursor()
            # Seeds are 64-bit unsigned, wider than SQLite's INTEGER
            cursor.execute("""
                INSERT INTO run_reports
                (suite, property, seed, tests, verdict, counterexample, elapsed_ms, test_index, created_at)
                VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)
            """, (
                report.suite,
                report.property,
                str(report.seed),
                report.tests,
                report.verdict,
                report.counterexample,
                report.elapsed_ms,
                report.test_index,
                datetime.now().isoformat(),
            ))
            conn.commit()
            report_id = cursor.lastrowid
        finally:
            conn.close()
        logger.debug("Saved report %d for %s/%s", report_id, report.suite, report.property)
        return report_id

    def recent(self, limit: int = 20, suite: Optional[str] = None) -> List[RunReport]:
        conn = self.get_db_connection()
        try:
            cursor = conn.cursor()
            query = """
                SELECT suite, property, seed, tests, verdict, counterexample, elapsed_ms, test_index
                FROM run_reports
            """
            params: tuple = ()
            if suite is not None:
                query += " WHERE suite = ?"
                params = (suite,)
            query += " ORDER BY id DESC LIMIT ?"
            cursor.execute(query, params + (limit,))
            rows = cursor.fetchall()
        finally:
            conn.close()

        return [
            RunReport(
                suite=row[0],
                property=row[1],
                seed=int(row[2]),
                tests=row[3],
                verdict=row[4],
                counterexample=row[5],
                elapsed_ms=row[6],
                test_index=row[7],
            )
            for row in rows
        ]
