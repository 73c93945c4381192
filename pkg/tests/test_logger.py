import logging

from hr_rigidity.logger import LOG_DIR_ENV, LOGGER_NAME, get_log_directory, get_logger, setup_logging, suite_timer

def test_log_directory_honours_environment(tmp_path, monkeypatch):
    target = tmp_path / "registros"
    monkeypatch.setenv(LOG_DIR_ENV, str(target))
    assert get_log_directory() == target
    assert target.is_dir()

def test_setup_logging_replaces_handlers(tmp_path):
    log_file = tmp_path / "logs" / "hr.log"
    setup_logging("debug", log_file, console_output=False)
    logger = setup_logging("warning", log_file, console_output=False)
    assert logger.name == LOGGER_NAME
    assert logger.level == logging.WARNING
    assert len(logger.handlers) == 1
    assert log_file.exists()

def test_suite_timer_logs_counts(tmp_path):
    log_file = tmp_path / "hr.log"
    logger = setup_logging("info", log_file, console_output=False)
    counts = {}
    with suite_timer("symfun", counts):
        counts.update({"pass": 3, "fail": 0})
    for handler in logger.handlers:
        handler.flush()
    text = log_file.read_text(encoding="utf-8")
    assert "Suite 'symfun' iniciada" in text
    assert "fail=0, pass=3" in text

def test_get_logger_configures_defaults_once(tmp_path, monkeypatch):
    monkeypatch.setenv(LOG_DIR_ENV, str(tmp_path / "defecto"))
    logging.getLogger(LOGGER_NAME).handlers.clear()
    logger = get_logger()
    assert logger.handlers
    assert (tmp_path / "defecto" / "hr-rigidity.log").exists()
    assert get_logger() is logger
    assert len(logger.handlers) == 2
