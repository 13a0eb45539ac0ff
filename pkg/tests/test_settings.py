# -*- coding: utf-8 -*-
import json
import logging

import numpy as np
import pytest
from pydantic import ValidationError

from core.errors import InputFormatError
from utils.file_handler import FileHandler
from utils.logger import PACKAGE_LOGGERS, setup_logger
from utils.settings_manager import SettingsManager, ToolkitTolerances, get_tolerances


class TestSettingsManager:
    def test_shipped_config_matches_defaults(self):
        assert get_tolerances() == ToolkitTolerances()

    def test_missing_file_falls_back(self, tmp_path):
        manager = SettingsManager(tmp_path / "missing.json")
        assert manager.tolerances == ToolkitTolerances()

    def test_comment_keys_ignored(self, tmp_path):
        path = tmp_path / "toolkit.json"
        path.write_text(json.dumps({"tolerances": {"_note": "x", "theta_grid": 256}}), encoding="utf-8")
        tolerances = SettingsManager(path).tolerances
        assert tolerances.theta_grid == 256
        assert tolerances.violation_tolerance == 1e-8

    def test_invalid_values_fall_back(self, tmp_path):
        path = tmp_path / "toolkit.json"
        path.write_text(json.dumps({"theta_grid": 2}), encoding="utf-8")
        assert SettingsManager(path).tolerances.theta_grid == 1024

    def test_broken_json_falls_back(self, tmp_path):
        path = tmp_path / "toolkit.json"
        path.write_text("{", encoding="utf-8")
        assert SettingsManager(path).tolerances == ToolkitTolerances()

    def test_frozen(self):
        with pytest.raises(ValidationError):
            get_tolerances().theta_grid = 8

    def test_as_dict(self):
        assert SettingsManager().as_dict()["binomial_cap"] == 32


class TestFileHandler:
    def test_matrix_round_trip(self, tmp_path, J2):
        files = FileHandler()
        path = files.save_matrix(J2, tmp_path / "sub" / "j2.json")
        assert np.array_equal(files.load_matrix(path).entries, J2.entries)

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputFormatError, match="file not found"):
            FileHandler().load_json_data(tmp_path / "nope.json")

    def test_bad_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("[1, 2", encoding="utf-8")
        with pytest.raises(InputFormatError):
            FileHandler().load_json_data(path)

    def test_bad_matrix(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"n": 2, "entries": [[[1, 0]]]}), encoding="utf-8")
        with pytest.raises(InputFormatError, match="invalid matrix"):
            FileHandler().load_matrix(path)

    def test_save_text_keeps_newlines(self, tmp_path):
        path = FileHandler().save_text("a,b\r\n1,2\r\n", tmp_path / "out.csv")
        assert path.read_bytes() == b"a,b\r\n1,2\r\n"


class TestLogger:
    def test_package_loggers_share_handlers(self, tmp_path):
        logger = setup_logger(name="numradx-test", level="DEBUG", log_dir=tmp_path)
        try:
            assert len(logger.handlers) == 3
            for package in PACKAGE_LOGGERS:
                child = logging.getLogger(package)
                assert child.level == logging.DEBUG
                assert all(h in child.handlers for h in logger.handlers)
            logging.getLogger("core.suite").error("boom")
            for handler in logger.handlers:
                handler.flush()
            assert "boom" in (tmp_path / "error.log").read_text(encoding="utf-8")
        finally:
            for handler in list(logger.handlers):
                for package in PACKAGE_LOGGERS:
                    logging.getLogger(package).removeHandler(handler)
                logger.removeHandler(handler)
                handler.close()
            for package in PACKAGE_LOGGERS:
                logging.getLogger(package).setLevel(logging.NOTSET)

    def test_setup_is_idempotent(self):
        logger = setup_logger(name="numradx-idem", level="INFO")
        try:
            count = len(logger.handlers)
            setup_logger(name="numradx-idem", level="WARNING")
            assert len(logger.handlers) == count
            assert logger.level == logging.WARNING
        finally:
            for handler in list(logger.handlers):
                for package in PACKAGE_LOGGERS:
                    logging.getLogger(package).removeHandler(handler)
                logger.removeHandler(handler)
