"""
Bundled instance management.
Loads the matrix documents shipped in the instances directory, keyed by file name.
"""

import os
from typing import Dict, List, Optional

from algebra.tropical_core import TropMatrix
from utils.matrix_io import MatrixDocument, load_document, to_matrix


class InstanceLibrary:
    """
    Named matrix documents loaded from the JSON files of an instances directory.
    """

    def __init__(self, instances_dir: str = None):
        """
        Initialize the library.

        Args:
            instances_dir: Directory holding the instance files.
                           If None, uses the instances directory at the project root.
        """
        if instances_dir is None:
            current_dir = os.path.dirname(os.path.abspath(__file__))
            project_root = os.path.dirname(current_dir)
            instances_dir = os.path.join(project_root, "instances")

        self.instances_dir = instances_dir
        self.documents = self._load_all_instances()

    def _load_all_instances(self) -> Dict[str, MatrixDocument]:
        """
        Load every JSON file in the instances directory.

        Raises:
            FileNotFoundError: If the instances directory doesn't exist
            ValueError: If an instance file cannot be parsed
        """
        if not os.path.exists(self.instances_dir):
            raise FileNotFoundError(f"Instances directory {self.instances_dir} not found.")

        documents = {}
        for filename in sorted(os.listdir(self.instances_dir)):
            if filename.endswith('.json'):
                name = filename[:-5]
                file_path = os.path.join(self.instances_dir, filename)
                try:
                    documents[name] = load_document(file_path)
                except ValueError as e:
                    raise ValueError(f"Error loading instance file {file_path}: {e}")
        return documents

    def names(self) -> List[str]:
        return list(self.documents)

    def get_document(self, name: str) -> MatrixDocument:
        """
        Raises:
            KeyError: If no instance has that name
        """
        try:
            return self.documents[name]
        except KeyError:
            raise KeyError(f"Instance '{name}' not found in {self.instances_dir}")

    def get_matrix(self, name: str, tolerance: float = 1e-9) -> TropMatrix:
        return to_matrix(self.get_document(name), tolerance)

    def find(self, name_or_path: str) -> Optional[MatrixDocument]:
        """A bundled document by name or file name ("schwarz7" or "schwarz7.json"), else None."""
        key = os.path.basename(name_or_path)
        if key.endswith('.json'):
            key = key[:-5]
        return self.documents.get(key)
