from __future__ import annotations

import json
import os
from typing import Any, List, Optional, Union

import pandas as pd
from pydantic import model_validator

from advicegame.resources._model import BaseModel

# significant digits of every float written to a file
FLOAT_FORMAT = "%.12g"


class Records(BaseModel):
    """Row-oriented tabular result with a fixed column order."""

    data: List[dict] = []
    columns: Optional[List[str]] = None
    total: int = 0

    @model_validator(mode="before")
    @classmethod
    def convert_records_list_only(cls, data: Any) -> Any:
        if isinstance(data, list):
            return {"data": data, "total": len(data)}
        if isinstance(data, dict) and "total" not in data:
            return {**data, "total": len(data.get("data", []))}
        return data

    def to_df(self, **kwargs) -> pd.DataFrame:
        kwargs.setdefault("columns", self.columns)
        return pd.DataFrame.from_records(self.data, **kwargs)

    def to_csv(
        self, path: Union[str, os.PathLike], comment: Optional[str] = None
    ) -> None:
        """Writes the rows as CSV, preceded by ``# comment`` when given."""
        with open(path, "w", encoding="utf-8", newline="") as handle:
            if comment is not None:
                handle.write(f"# {comment}\n")
            self.to_df().to_csv(handle, index=False, float_format=FLOAT_FORMAT)

    def to_json(self, path: Union[str, os.PathLike]) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(self.data, handle, indent=2)
            handle.write("\n")

    @classmethod
    def read_csv(cls, path: Union[str, os.PathLike]) -> Records:
        """Reads a file written by ``to_csv``; comment lines are skipped."""
        df = pd.read_csv(path, comment="#", float_precision="round_trip")
        rows = [
            {key: _native(value) for key, value in row.items()}
            for row in df.to_dict(orient="records")
        ]
        return cls(data=rows, columns=list(df.columns))


def _native(value: Any) -> Any:
    # numpy scalars to plain python values
    return value.item() if hasattr(value, "item") else value
