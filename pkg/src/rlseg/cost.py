"""Operation counters for the compressed-domain paths."""

from dataclasses import asdict, dataclass, fields


@dataclass
class CostLedger:
    additions: int = 0       # row-profile accumulations
    profile_steps: int = 0   # profile entries visited by line segmentation
    advances: int = 0        # virtual-column scanner advances
    pops: int = 0            # single-pixel pops from run heads
    shifts: int = 0          # run-pair shifts once both heads are exhausted
    codewords: int = 0       # Huffman codewords decoded or emitted
    pixel_ops: int = 0       # pixel-domain reads or writes

    def merge(self, other: "CostLedger") -> "CostLedger":
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))
        return self

    def as_dict(self) -> dict:
        return asdict(self)
