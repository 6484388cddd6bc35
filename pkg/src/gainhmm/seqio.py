"""FASTA and segment-table file handling.

FASTA headers may carry key=value attributes after the record id; subtype
alignments use `subtype=<name>`. Segment tables are TSV with 1-based
inclusive coordinates, one line per maximal same-color segment.
"""

from __future__ import annotations

from .jumping import SubtypeAlignment
from .model import Annotation

SEGMENT_HEADER = ("seq_id", "start", "end", "color_id", "color_name")


class FastaRecord:
    def __init__(self, rid, seq, attrs=None):
        self.id = rid
        self.seq = seq
        self.attrs = attrs or {}

    def __iter__(self):
        return iter((self.id, self.seq))


def read_fasta(path):
    """Parse FASTA into FastaRecords; errors carry file and line number."""
    records = []
    rid, attrs, chunks = None, None, []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith(">"):
                if rid is not None:
                    records.append(FastaRecord(rid, "".join(chunks), attrs))
                fields = line[1:].split()
                if not fields:
                    raise ValueError(f"{path}:{lineno}: header with no id")
                rid = fields[0]
                attrs = {}
                for tok in fields[1:]:
                    if "=" in tok:
                        k, v = tok.split("=", 1)
                        attrs[k] = v
                chunks = []
            else:
                if rid is None:
                    raise ValueError(f"{path}:{lineno}: sequence before first header")
                chunks.append(line)
        if rid is not None:
            records.append(FastaRecord(rid, "".join(chunks), attrs))
    return records


def write_fasta(path, records, width=70):
    """Write (id, seq) pairs or FastaRecords as FASTA."""
    with open(path, "w") as fh:
        for rec in records:
            if isinstance(rec, FastaRecord):
                rid, seq, attrs = rec.id, rec.seq, rec.attrs
            else:
                rid, seq = rec
                attrs = {}
            extra = "".join(f" {k}={v}" for k, v in attrs.items())
            fh.write(f">{rid}{extra}\n")
            for i in range(0, len(seq), width):
                fh.write(seq[i:i + width] + "\n")


def read_subtype_alignment(path):
    """Subtype alignment from FASTA with subtype=<name> header attributes.

    Subtype order follows first appearance in the file.
    """
    records = read_fasta(path)
    if not records:
        raise ValueError(f"{path}: no sequences")
    names, groups = [], {}
    length = len(records[0].seq)
    for rec in records:
        subtype = rec.attrs.get("subtype")
        if subtype is None:
            raise ValueError(f"{path}: record {rec.id!r} lacks a subtype=<name> attribute")
        if subtype not in groups:
            names.append(subtype)
            groups[subtype] = []
        groups[subtype].append(rec.seq.lower())
    return SubtypeAlignment(names=tuple(names), groups=groups, length=length)


def write_segments(path, entries, color_names):
    """Write (seq_id, Annotation) pairs as a segment TSV."""
    with open(path, "w") as fh:
        fh.write("\t".join(SEGMENT_HEADER) + "\n")
        for seq_id, annotation in entries:
            for start, end, color in annotation.segments:
                fh.write(f"{seq_id}\t{start}\t{end}\t{color}\t{color_names[color]}\n")


def read_segments(path):
    """Read a segment TSV back into {seq_id: Annotation}, file order."""
    per_seq = {}
    with open(path) as fh:
        header = fh.readline().rstrip("\n")
        if header.split("\t") != list(SEGMENT_HEADER):
            raise ValueError(f"{path}:1: unexpected segment table header")
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != len(SEGMENT_HEADER):
                raise ValueError(f"{path}:{lineno}: expected {len(SEGMENT_HEADER)} columns")
            seq_id, start, end, color, _name = parts
            per_seq.setdefault(seq_id, []).append((int(start), int(end), int(color)))
    return {sid: Annotation.from_segments(segs) for sid, segs in per_seq.items()}
