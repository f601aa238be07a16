import logging
import sys

import pytest

from logger_config import DATE_FORMAT, LOG_FORMAT, parse_level, set_log_level, setup_logger


class TestSetupLogger:
    """Tests for the shared logger factory."""

    def test_configures_stderr_handler(self):
        """Test a fresh logger gets one stderr handler with the shared format."""
        # Execute
        logger = setup_logger("tests.logger.fresh")

        # Assert
        assert len(logger.handlers) == 1
        handler = logger.handlers[0]
        assert isinstance(handler, logging.StreamHandler)
        assert handler.stream is sys.stderr
        assert handler.formatter._fmt == LOG_FORMAT
        assert handler.formatter.datefmt == DATE_FORMAT
        assert logger.propagate is False

    def test_second_call_reuses_handler(self):
        """Test setting up the same name twice does not duplicate handlers."""
        # Setup
        first = setup_logger("tests.logger.twice")

        # Execute
        second = setup_logger("tests.logger.twice")

        # Assert
        assert first is second
        assert len(second.handlers) == 1

    def test_default_level_is_info(self):
        """Test the default level."""
        # Execute
        logger = setup_logger("tests.logger.default_level")

        # Assert
        assert logger.level == logging.INFO

    def test_explicit_level(self):
        """Test a level given by name."""
        # Execute
        logger = setup_logger("tests.logger.debug_level", "debug")

        # Assert
        assert logger.level == logging.DEBUG


class TestLevels:
    """Tests for level parsing and global level changes."""

    def test_parse_level_variants(self):
        """Test names, numbers and None."""
        # Assert
        assert parse_level(None) == logging.INFO
        assert parse_level("warning") == logging.WARNING
        assert parse_level(" ERROR ") == logging.ERROR
        assert parse_level(15) == 15

    def test_parse_level_rejects_unknown_name(self):
        """Test an unknown level name."""
        # Execute / Assert
        with pytest.raises(ValueError, match="Unknown log level"):
            parse_level("chatty")

    def test_set_log_level_updates_managed_loggers(self):
        """Test set_log_level reaches every logger made by setup_logger."""
        # Setup
        first = setup_logger("tests.logger.managed_a")
        second = setup_logger("tests.logger.managed_b")

        try:
            # Execute
            set_log_level("WARNING")

            # Assert
            assert first.level == logging.WARNING
            assert second.level == logging.WARNING
        finally:
            set_log_level(logging.INFO)

    def test_set_log_level_leaves_other_loggers(self):
        """Test loggers created elsewhere keep their level."""
        # Setup
        outsider = logging.getLogger("tests.logger.outsider")
        outsider.setLevel(logging.ERROR)

        try:
            # Execute
            set_log_level("DEBUG")

            # Assert
            assert outsider.level == logging.ERROR
        finally:
            set_log_level(logging.INFO)
