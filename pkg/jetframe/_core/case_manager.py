from pathlib import Path
from typing import List, Union

CASE_SUFFIXES = (".case", ".yaml", ".yml")


class CaseManager:
    """
    Locate and read problem-specification case files.

    Responsibilities:
        - Find a shipped case file by name under ``jetframe/cases/_configs``,
          a sectioned ``.case`` file before a ``.yaml`` one
        - Accept explicit paths to user case files
        - Return the raw text, so the parser can report line/column positions
    """

    @staticmethod
    def build_case_path(case_name: str) -> Path:
        """
        Build the file path to a shipped case file.

        Args:
            case_name (str): Name of the case (file without extension).

        Returns:
            Path: Full path to the case file; the ``.yaml`` one when no
            ``.case`` file exists.
        """
        current_file_path = Path(__file__).resolve()
        configs = current_file_path.parent.parent / "cases" / "_configs"
        sectioned = configs / f"{case_name}.case"
        return sectioned if sectioned.exists() else configs / f"{case_name}.yaml"

    @staticmethod
    def resolve(case: Union[str, Path]) -> Path:
        """
        Resolve a case argument to a file path.

        An existing path is used as is; anything else is treated as the name
        of a shipped case.

        Args:
            case (Union[str, Path]): A file path or a shipped case name.

        Returns:
            Path: Path to the case file (not guaranteed to exist).
        """
        path = Path(case)
        if path.suffix in CASE_SUFFIXES or path.exists():
            return path
        return CaseManager.build_case_path(str(case))

    @staticmethod
    def load_case_text(case: Union[str, Path]) -> str:
        """
        Read the raw text of a case file.

        Args:
            case (Union[str, Path]): A file path or a shipped case name.

        Returns:
            str: The file contents.

        Raises:
            FileNotFoundError: If the case file does not exist.
        """
        path = CaseManager.resolve(case)
        if not path.exists():
            raise FileNotFoundError(f"Case file not found: {path.parts[-3:]}")
        with open(path) as f:
            return f.read()

    @staticmethod
    def list_cases() -> List[str]:
        """
        List all shipped case names.

        Returns:
            List[str]: Case names (without file extensions), sorted.
        """
        configs = CaseManager.build_case_path("_").parent
        return sorted({p.stem for p in configs.iterdir() if p.suffix in CASE_SUFFIXES})
