"""Dataset index loading and the thin archive-download client.

A dataset root is a directory holding ``index.csv`` with the columns
``image_id,image_path,mask_path,label`` (paths relative to the root,
mask_path empty when no expert mask exists) plus the referenced PNG files.
"""
from __future__ import annotations

import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import requests

from .errors import (
    DuplicateImageId,
    MalformedRow,
    MissingFile,
    MissingIndexFile,
    NetworkError,
    NotFound,
    UnknownLabel,
)
from .imaging import LABEL_BENIGN, LABEL_MALIGNANT

log = logging.getLogger("patchscore")

INDEX_NAME = "index.csv"
INDEX_COLUMNS = ["image_id", "image_path", "mask_path", "label"]
LABEL_NAMES = {"benign": LABEL_BENIGN, "malignant": LABEL_MALIGNANT}
LABEL_STRINGS = {value: name for name, value in LABEL_NAMES.items()}


@dataclass(frozen=True)
class IndexRecord:
    image_id: str
    image_path: Path
    mask_path: Path | None
    label: int

    @property
    def has_mask(self) -> bool:
        return self.mask_path is not None


@dataclass(frozen=True)
class DatasetIndex:
    root: Path
    records: tuple[IndexRecord, ...]

    def __len__(self) -> int:
        return len(self.records)

    def by_id(self) -> dict[str, IndexRecord]:
        return {record.image_id: record for record in self.records}


def load_index(root: str | Path) -> DatasetIndex:
    """Read and validate ``root/index.csv``.

    Rows without a mask are kept (they are filtered later, during class
    balancing); every referenced file must exist.
    """
    root = Path(root)
    index_path = root / INDEX_NAME
    if not index_path.is_file():
        raise MissingIndexFile(f"no {INDEX_NAME} in {root}")
    records = []
    seen = set()
    with index_path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != INDEX_COLUMNS:
            raise MalformedRow(f"{index_path}:1: expected header {','.join(INDEX_COLUMNS)}")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(INDEX_COLUMNS):
                raise MalformedRow(f"{index_path}:{line_no}: expected 4 fields, got {len(row)}")
            image_id, image_rel, mask_rel, label_name = (value.strip() for value in row)
            if not image_id:
                raise MalformedRow(f"{index_path}:{line_no}: empty image_id")
            if image_id in seen:
                raise DuplicateImageId(f"{index_path}:{line_no}: duplicate id {image_id}")
            seen.add(image_id)
            if label_name not in LABEL_NAMES:
                raise UnknownLabel(f"{index_path}:{line_no}: unknown label {label_name!r}")
            image_path = root / image_rel
            if not image_path.is_file():
                raise MissingFile(f"{index_path}:{line_no}: missing image {image_path}")
            mask_path = None
            if mask_rel:
                mask_path = root / mask_rel
                if not mask_path.is_file():
                    raise MissingFile(f"{index_path}:{line_no}: missing mask {mask_path}")
            records.append(
                IndexRecord(image_id, image_path, mask_path, LABEL_NAMES[label_name])
            )
    return DatasetIndex(root=root, records=tuple(records))


def write_index(index: DatasetIndex, root: str | Path | None = None) -> Path:
    """Write ``index.csv`` under ``root`` (defaults to the index's own root)."""
    root = Path(root) if root is not None else index.root
    root.mkdir(parents=True, exist_ok=True)
    index_path = root / INDEX_NAME
    with index_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(INDEX_COLUMNS)
        for record in index.records:
            writer.writerow(
                [
                    record.image_id,
                    record.image_path.relative_to(root).as_posix(),
                    record.mask_path.relative_to(root).as_posix() if record.mask_path else "",
                    LABEL_STRINGS[record.label],
                ]
            )
    return index_path


@dataclass(frozen=True)
class FetchResult:
    index: DatasetIndex
    statuses: dict[str, str]


def fetch_remote(
    image_ids: list[str],
    endpoint: str,
    dest: str | Path,
    concurrency: int = 4,
    timeout: float = 30.0,
) -> FetchResult:
    """Download images, masks and labels for ``image_ids`` into ``dest``.

    The endpoint must serve ``{endpoint}/image/{id}`` and
    ``{endpoint}/mask/{id}`` as PNG bytes and ``{endpoint}/label/{id}`` as
    JSON ``{"label": "benign"|"malignant"}``. A missing mask is fine (the
    record is kept without one); a missing image or label marks the id
    not_found. Downloads are idempotent: a local file whose size matches the
    remote Content-Length is not fetched again. Failures are per-id; the
    returned statuses map each id to ok / not_found / error:...
    """
    dest = Path(dest)
    (dest / "images").mkdir(parents=True, exist_ok=True)
    (dest / "masks").mkdir(parents=True, exist_ok=True)
    endpoint = endpoint.rstrip("/")
    statuses: dict[str, str] = {}
    fetched: dict[str, tuple[str, str, str]] = {}

    def fetch_one(image_id: str):
        session = requests.Session()
        try:
            image_rel = f"images/{image_id}.png"
            _download(session, f"{endpoint}/image/{image_id}", dest / image_rel, timeout)
            label_response = session.get(f"{endpoint}/label/{image_id}", timeout=timeout)
            if label_response.status_code == 404:
                raise NotFound(image_id)
            label_response.raise_for_status()
            label_name = label_response.json()["label"]
            if label_name not in LABEL_NAMES:
                raise UnknownLabel(f"{image_id}: {label_name!r}")
            mask_rel = f"masks/{image_id}.png"
            try:
                _download(session, f"{endpoint}/mask/{image_id}", dest / mask_rel, timeout)
            except NotFound:
                mask_rel = ""
            fetched[image_id] = (image_rel, mask_rel, label_name)
            statuses[image_id] = "ok"
        except NotFound:
            statuses[image_id] = "not_found"
            log.warning("image %s not found at %s", image_id, endpoint)
        except NetworkError as exc:
            statuses[image_id] = f"error: network: {exc}"
            log.warning("fetching %s failed: %s", image_id, exc)
        except (requests.RequestException, OSError, KeyError, ValueError) as exc:
            statuses[image_id] = f"error: {exc}"
            log.warning("fetching %s failed: %s", image_id, exc)
        finally:
            session.close()

    if image_ids:
        with ThreadPoolExecutor(max_workers=max(1, concurrency)) as pool:
            list(pool.map(fetch_one, image_ids))
        if all(status.startswith("error: network") for status in statuses.values()):
            raise NetworkError(f"endpoint {endpoint} unreachable for all {len(image_ids)} ids")

    rows = []
    for image_id in sorted(fetched):
        image_rel, mask_rel, label_name = fetched[image_id]
        rows.append(
            IndexRecord(
                image_id,
                dest / image_rel,
                dest / mask_rel if mask_rel else None,
                LABEL_NAMES[label_name],
            )
        )
    write_index(DatasetIndex(root=dest, records=tuple(rows)))
    return FetchResult(index=load_index(dest), statuses=statuses)


def _download(session: requests.Session, url: str, target: Path, timeout: float):
    """GET ``url`` into ``target`` unless a same-size local copy exists."""
    if target.is_file():
        try:
            head = session.head(url, timeout=timeout)
        except requests.ConnectionError as exc:
            raise NetworkError(f"cannot reach {url}: {exc}") from exc
        if head.status_code == 404:
            raise NotFound(url)
        remote_size = head.headers.get("Content-Length")
        if remote_size is not None and int(remote_size) == target.stat().st_size:
            return
    try:
        response = session.get(url, timeout=timeout)
    except requests.ConnectionError as exc:
        raise NetworkError(f"cannot reach {url}: {exc}") from exc
    if response.status_code == 404:
        raise NotFound(url)
    response.raise_for_status()
    target.write_bytes(response.content)
