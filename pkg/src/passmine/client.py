"""Typed client for the service.

Without a base URL the client mounts the app in-process, so library and
CLI callers get service semantics with no socket; with one it talks to a
remote deployment over HTTP.
"""

from __future__ import annotations

import asyncio
from typing import Any

import httpx


class ServiceError(Exception):
    """Non-2xx response from the service."""

    def __init__(self, status_code: int, detail: str):
        super().__init__(f"service returned {status_code}: {detail}")
        self.status_code = status_code
        self.detail = detail


class ServiceClient:
    """Thin JSON-over-HTTP wrapper around the service endpoints."""

    def __init__(self, base_url: str | None = None):
        self._base_url = base_url
        self._app = None
        if base_url is None:
            from .service.app import create_app

            self._app = create_app()

    # -- transport -----------------------------------------------------------

    def _request(self, method: str, path: str, payload: dict[str, Any] | None = None) -> Any:
        if self._base_url is None:
            return asyncio.run(self._request_inprocess(method, path, payload))
        try:
            with httpx.Client(base_url=self._base_url, timeout=None) as client:
                resp = client.request(method, path, json=payload)
        except httpx.HTTPError as e:
            raise OSError(f"cannot reach service at {self._base_url}: {e}") from e
        return self._unwrap(resp)

    async def _request_inprocess(self, method: str, path: str, payload: dict[str, Any] | None) -> Any:
        transport = httpx.ASGITransport(app=self._app)
        async with httpx.AsyncClient(transport=transport, base_url="http://service", timeout=None) as client:
            resp = await client.request(method, path, json=payload)
        return self._unwrap(resp)

    @staticmethod
    def _unwrap(resp: httpx.Response) -> Any:
        if resp.status_code >= 400:
            try:
                detail = resp.json().get("detail", resp.text)
            except ValueError:
                detail = resp.text
            raise ServiceError(resp.status_code, str(detail))
        return resp.json()

    # -- endpoints -----------------------------------------------------------

    def health(self) -> dict[str, Any]:
        return self._request("GET", "/health")

    def ratio(self, a: str, b: str) -> int:
        return self._request("POST", "/similarity/ratio", {"a": a, "b": b})["ratio"]

    def extract(
        self, query: str, choices: list[str], *, score_cutoff: int = 75, limit: int = 10
    ) -> list[dict[str, Any]]:
        body = {"query": query, "choices": choices, "score_cutoff": score_cutoff, "limit": limit}
        return self._request("POST", "/similarity/extract", body)["matches"]

    def ingest(
        self,
        events: list[dict[str, Any]],
        *,
        team_id: int,
        tags: list[int],
        strict: bool = False,
    ) -> dict[str, Any]:
        body = {"events": events, "team_id": team_id, "tags": tags, "strict": strict}
        return self._request("POST", "/ingest", body)

    def scale(
        self,
        passes: list[dict[str, Any]],
        *,
        bins_per_half: int,
        max_minutes: float,
        overflow_policy: str,
        name: str | None = None,
    ) -> dict[str, Any]:
        body = {
            "passes": passes,
            "bins_per_half": bins_per_half,
            "max_minutes": max_minutes,
            "overflow_policy": overflow_policy,
            "name": name,
        }
        return self._request("POST", "/scale", body)

    def basis(self, cxt: str, *, min_support: int) -> dict[str, Any]:
        return self._request("POST", "/basis", {"cxt": cxt, "min_support": min_support})

    def search(
        self,
        index: dict[str, Any],
        targets: list[dict[str, Any]],
        *,
        score_cutoff: int,
        limit: int,
        dedup_hits: bool,
    ) -> dict[str, Any]:
        body = {
            "index": index,
            "targets": targets,
            "score_cutoff": score_cutoff,
            "limit": limit,
            "dedup_hits": dedup_hits,
        }
        return self._request("POST", "/search", body)

    def pipeline(
        self,
        events: list[dict[str, Any]],
        index: dict[str, Any],
        targets: list[dict[str, Any]],
        params: dict[str, Any],
    ) -> dict[str, Any]:
        body = {"events": events, "index": index, "targets": targets, "params": params}
        return self._request("POST", "/pipeline", body)
