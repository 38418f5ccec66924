import os
import time
import logging

import psutil

logger = logging.getLogger(__name__)


def get_process_metrics(pid=None):
    """Get CPU and memory usage of a process given its PID (default: this process)."""
    pid = os.getpid() if pid is None else pid
    logger.debug(f"Getting metrics for process with PID: {pid}")
    try:
        process = psutil.Process(pid)
        cpu_usage = process.cpu_percent(interval=0.1)
        memory_usage = process.memory_info().rss / (1024 * 1024)  # MB
        return {
            "cpu_usage": f"{cpu_usage:.2f} %",
            "memory_usage": f"{memory_usage:.2f} MB",
        }
    except psutil.NoSuchProcess:
        return {"error": f"Process {pid} does not exist"}


def elapsed_ms(since):
    """Milliseconds since a `time.perf_counter()` reading, as an integer."""
    return int((time.perf_counter() - since) * 1000)
