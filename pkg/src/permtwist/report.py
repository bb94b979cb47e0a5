"""Check reports shared by the verification suites and the CLI."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class Report:
    check_id: str
    anchor: str
    status: str            # "pass" | "fail"
    witness: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def machine_line(self) -> str:
        w = self.witness.replace("\n", " ")
        return f"id={self.check_id} anchor={self.anchor} status={self.status} witness={w!r}"

    def text_line(self) -> str:
        mark = "ok " if self.passed else "FAIL"
        tail = f"  [{self.witness}]" if self.witness and not self.passed else ""
        return f"[{mark}] {self.check_id}{tail}"
