import io
import unittest

from quintlab.logging import DefaultLogger, LoggingLevel


class LoggingTests(unittest.TestCase):
    def test_format_succeeds(self) -> None:
        stream = io.StringIO()
        logger = DefaultLogger("nls[shared]", LoggingLevel.DEBUG, stream=stream)
        logger.info("step done", t=0.1234567891, n=3)
        self.assertEqual("INFO[nls[shared]]: step done (t=0.123457, n=3)\n", stream.getvalue())

    def test_level_filter_succeeds(self) -> None:
        stream = io.StringIO()
        logger = DefaultLogger("tests", LoggingLevel.WARNING, stream=stream)
        logger.debug("hidden")
        logger.info("hidden")
        logger.warning("shown")
        logger.error("shown too")
        self.assertEqual(2, len(stream.getvalue().splitlines()))

    def test_timed_succeeds(self) -> None:
        stream = io.StringIO()
        logger = DefaultLogger("tests", LoggingLevel.DEBUG, stream=stream)
        with logger.timed("enumerate", r=2):
            pass
        lines = stream.getvalue().splitlines()
        self.assertEqual("DEBUG[tests]: enumerate started (r=2)", lines[0])
        pattern = r"^INFO\[tests\]: enumerate finished \(seconds=[0-9.e-]+, r=2\)$"
        self.assertRegex(lines[1], pattern)

    def test_from_name_succeeds(self) -> None:
        self.assertIs(LoggingLevel.DEBUG, LoggingLevel.from_name("debug"))
        self.assertIs(LoggingLevel.ERROR, LoggingLevel.from_name("ERROR"))

    def test_from_name_fails(self) -> None:
        with self.assertRaisesRegex(ValueError, "HINT"):
            LoggingLevel.from_name("verbose")
