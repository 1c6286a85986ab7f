"""Command-line client for the benchmark service.

Builds an experiment request from flags, submits it to the HTTP service
(an in-process application instance by default, or a remote one via
``--server``), and writes records.csv, summary.csv, per-metric SVG charts
and plotdata.txt under ``--out``.
"""

from __future__ import annotations

import argparse
import asyncio
import sys

import httpx
from pydantic import ValidationError

from .harness import write_csv
from .service.schemas import (
    DirectorySourceModel,
    ExperimentRequest,
    ExperimentResponse,
    NoiseModel,
    SyntheticSourceModel,
)
from .svgplot import emit_plot_data

_NOISE_FLAGS = {"block": "block_occlusion", "salt_pepper": "salt_pepper", "none": "none"}
_DEFAULT_REDUCE = {"orl": 3, "yaleb": 4}


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated integer list, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nmfbench",
        description="Run the NMF noise-robustness benchmark and write CSV/SVG results.",
    )
    parser.add_argument("--dataset", choices=("orl", "yaleb", "synthetic"), default="synthetic")
    parser.add_argument("--data-dir", help="root directory of per-subject PGM folders")
    parser.add_argument("--reduce", type=int, default=None,
                        help="pixel decimation stride (default: 3 for orl, 4 for yaleb)")
    parser.add_argument("--noise", choices=tuple(_NOISE_FLAGS), default="none")
    parser.add_argument("--block-size", type=int, default=10)
    parser.add_argument("--fill-value", type=float, default=0.5)
    parser.add_argument("--fraction", type=float, default=0.4)
    parser.add_argument("--salt-ratio", type=float, default=0.45)
    parser.add_argument("--solvers", default="l1,l2,l21",
                        help="comma-separated subset of l1,l2,l21")
    parser.add_argument("--k", type=_int_list, default=[10, 20, 30, 40],
                        help="comma-separated component counts")
    parser.add_argument("--iters", type=int, default=200)
    parser.add_argument("--lambda", dest="lam", type=float, default=0.1)
    parser.add_argument("--train-fraction", type=float, default=0.9)
    parser.add_argument("--trials", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="./results")
    parser.add_argument("--cluster-on", choices=("coefficients", "reconstruction"),
                        default="coefficients")
    # synthetic dataset shape
    parser.add_argument("--subjects", type=int, default=20)
    parser.add_argument("--per-subject", type=int, default=10)
    parser.add_argument("--img-height", type=int, default=24)
    parser.add_argument("--img-width", type=int, default=20)
    parser.add_argument("--sample-noise", type=float, default=0.15,
                        help="within-subject perturbation amplitude (synthetic only)")
    parser.add_argument("--server", default=None,
                        help="base URL of a running service; default runs in process")
    return parser


def _build_request(args: argparse.Namespace) -> ExperimentRequest:
    if args.dataset == "synthetic":
        dataset = SyntheticSourceModel(
            n_subjects=args.subjects, per_subject=args.per_subject,
            height=args.img_height, width=args.img_width,
            noise_scale=args.sample_noise, seed=args.seed, name="synthetic",
        )
    else:
        if not args.data_dir:
            raise ValueError(f"--data-dir is required for --dataset {args.dataset}")
        reduce = args.reduce if args.reduce is not None else _DEFAULT_REDUCE[args.dataset]
        dataset = DirectorySourceModel(path=args.data_dir, reduce=reduce, name=args.dataset)
    noise = NoiseModel(
        kind=_NOISE_FLAGS[args.noise], block_size=args.block_size,
        fill_value=args.fill_value, fraction=args.fraction,
        salt_ratio=args.salt_ratio, seed=args.seed,
    )
    solvers = [s.strip() for s in args.solvers.split(",") if s.strip()]
    return ExperimentRequest(
        dataset=dataset, noise=noise, solvers=solvers, ks=args.k, lam=args.lam,
        train_fraction=args.train_fraction, trials=args.trials,
        max_iters=args.iters, base_seed=args.seed, cluster_on=args.cluster_on,
    )


def _submit(request: ExperimentRequest, server: str | None) -> dict:
    async def post(client: httpx.AsyncClient) -> dict:
        resp = await client.post("/experiments", json=request.model_dump())
        resp.raise_for_status()
        return resp.json()

    async def run() -> dict:
        if server:
            async with httpx.AsyncClient(base_url=server, timeout=None) as client:
                return await post(client)
        from .service.app import create_app

        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(transport=transport, timeout=None,
                                     base_url="http://nmfbench.local") as client:
            return await post(client)

    return asyncio.run(run())


def _print_summary(response: ExperimentResponse) -> None:
    print(f"{'solver':<8}{'k':>4}  {'metric':<6}{'mean':>12}{'std':>12}")
    for row in response.summaries:
        print(f"{row.solver:<8}{row.k:>4}  {row.metric:<6}{row.mean:>12.6g}{row.std:>12.6g}")


def run_cli(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage itself
        return int(exc.code or 0)

    try:
        request = _build_request(args)
    except (ValueError, ValidationError) as exc:
        print(f"nmfbench: invalid configuration: {exc}", file=sys.stderr)
        return 2

    try:
        payload = _submit(request, args.server)
    except httpx.HTTPStatusError as exc:
        detail = exc.response.text
        print(f"nmfbench: experiment failed ({exc.response.status_code}): {detail}",
              file=sys.stderr)
        return 1
    except httpx.RequestError as exc:
        print(f"nmfbench: cannot reach service: {exc}", file=sys.stderr)
        return 1

    response = ExperimentResponse.model_validate(payload)
    report = response.to_report()
    try:
        write_csv(report, args.out)
        emit_plot_data(report, args.out)
    except (OSError, ValueError) as exc:
        print(f"nmfbench: cannot write results: {exc}", file=sys.stderr)
        return 1
    _print_summary(response)
    print(f"results written to {args.out}")
    return 0


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
