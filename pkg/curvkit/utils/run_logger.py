"""
Experiment logging utility for structured logging of pipeline runs
"""

import json
import uuid
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterator, Optional

from curvkit.config.settings import get_settings
from curvkit.utils.logger import logger


class ExperimentLogger:
    """
    JSON-lines logger for experiment events

    One file per day; every entry carries the run id assigned at RUN_START so
    interleaved runs can be told apart.
    """

    def __init__(self, enabled: Optional[bool] = None, log_dir: str = 'logs/experiments'):
        self.enabled = get_settings().log_experiments if enabled is None else enabled
        self.log_dir = Path(log_dir)
        self.run_ids: Dict[str, str] = {}

        if self.enabled:
            self.log_dir.mkdir(parents=True, exist_ok=True)

    def _get_log_file(self) -> Path:
        today = datetime.now(timezone.utc).strftime('%Y-%m-%d')
        return self.log_dir / f'experiment-{today}.log'

    def _write_log(self, event_type: str, name: str, data: Dict[str, Any]):
        if not self.enabled:
            return

        entry = {
            'timestamp': datetime.now(timezone.utc).isoformat().replace('+00:00', 'Z'),
            'event': event_type,
            'run_id': self.run_ids.get(name),
            'name': name,
            **data
        }
        try:
            with open(self._get_log_file(), 'a', encoding='utf-8') as f:
                f.write(json.dumps(entry, default=str) + '\n')
        except OSError as e:
            logger.error(f"Error writing experiment log: {e}")

    def events(self, run_id: Optional[str] = None) -> Iterator[Dict[str, Any]]:
        """Logged entries in file order, optionally for a single run"""
        for path in sorted(self.log_dir.glob('experiment-*.log')):
            with open(path, encoding='utf-8') as f:
                for line in f:
                    entry = json.loads(line)
                    if run_id is None or entry.get('run_id') == run_id:
                        yield entry

    def log_run_start(self, name: str, seed: int, count: Optional[int]) -> str:
        run_id = uuid.uuid4().hex[:12]
        self.run_ids[name] = run_id
        self._write_log('RUN_START', name, {'seed': seed, 'count': count})
        return run_id

    def log_stage(self, name: str, stage: str, seconds: float):
        self._write_log('STAGE_END', name, {'stage': stage, 'seconds': seconds})

    def log_run_end(self, name: str, summary: Dict[str, Any]):
        self._write_log('RUN_END', name, {'summary': summary})
        self.run_ids.pop(name, None)

    def log_run_failed(self, name: str, stage: str, error: str):
        self._write_log('RUN_FAILED', name, {'stage': stage, 'error': error})
        self.run_ids.pop(name, None)
