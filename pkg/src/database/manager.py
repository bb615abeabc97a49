# File: src/database/manager.py

import json
import sqlite3
from datetime import datetime

from src.config import DB_PATH


def setup_database(db_path: str = DB_PATH):
    """Creates the database and the runs table if they don't exist."""
    conn = sqlite3.connect(db_path)
    cursor = conn.cursor()
    cursor.execute("""
    CREATE TABLE IF NOT EXISTS runs (
        id INTEGER PRIMARY KEY,
        timestamp TEXT NOT NULL,
        command TEXT NOT NULL,
        status TEXT NOT NULL,
        wall_time REAL,
        manifest TEXT
    )
    """)
    conn.commit()
    conn.close()


def add_record(command: str, status: str = "running", db_path: str = DB_PATH) -> int:
    """Adds a new run and returns its ID."""
    conn = sqlite3.connect(db_path)
    cursor = conn.cursor()
    timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
    cursor.execute(
        "INSERT INTO runs (timestamp, command, status) VALUES (?, ?, ?)",
        (timestamp, command, status)
    )
    new_id = cursor.lastrowid
    conn.commit()
    conn.close()
    return new_id


def update_record_result(record_id: int, status: str, wall_time: float, manifest: dict = None,
                         db_path: str = DB_PATH):
    """Stores the outcome of a run: exit status, wall time and manifest."""
    conn = sqlite3.connect(db_path)
    cursor = conn.cursor()
    cursor.execute(
        "UPDATE runs SET status = ?, wall_time = ?, manifest = ? WHERE id = ?",
        (status, wall_time, None if manifest is None else json.dumps(manifest, sort_keys=True), record_id)
    )
    conn.commit()
    conn.close()


def get_all_records(limit: int = None, db_path: str = DB_PATH) -> list:
    """Retrieves runs, newest first."""
    conn = sqlite3.connect(db_path)
    cursor = conn.cursor()
    query = "SELECT id, timestamp, command, status, wall_time, manifest FROM runs ORDER BY id DESC"
    if limit is not None:
        cursor.execute(query + " LIMIT ?", (limit,))
    else:
        cursor.execute(query)
    records = cursor.fetchall()
    conn.close()
    return records
