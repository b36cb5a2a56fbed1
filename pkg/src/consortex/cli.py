"""Command line entry points.

Exit codes: 0 success, 2 for input/usage errors, 3 when a size cap refuses
an exhaustive computation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .closure import canonical_base
from .consortium import (
    ExpertAnswer,
    Mode,
    SelectionStrategy,
    consortium_from_domain,
    parse_domain,
)
from .context import all_intents, parse_burmeister
from .errors import CapacityError, ConsortexError, FormatError
from .exploration import ExploreOptions, explore
from .implications import Implication, format_implication
from .oracles import ConsortiumOracle, FullDomainOracle
from .reconstruct import can_reconstruct_class, is_steiner_system
from .sets import Universe
from .simulate import parse_config, run_simulation


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror or exc}") from None


def _parse_strategy(text: str, seed: int) -> SelectionStrategy:
    """Strategy syntax: all | first | max-block | cost:<c0,c1,...> | sample:<k>."""
    policy, _, arg = text.partition(":")
    if policy in ("all", "first", "max-block"):
        if arg:
            raise FormatError(f"policy {policy!r} takes no argument")
        return SelectionStrategy(policy=policy, seed=seed)
    if policy == "cost":
        try:
            costs = tuple(float(c) for c in arg.split(",")) if arg else ()
        except ValueError:
            raise FormatError(f"bad cost list {arg!r}") from None
        if not costs:
            raise FormatError("cost policy needs cost:<c0,c1,...>")
        return SelectionStrategy(policy="cost", costs=costs, seed=seed)
    if policy == "sample":
        try:
            size = int(arg) if arg else 1
        except ValueError:
            raise FormatError(f"bad sample size {arg!r}") from None
        return SelectionStrategy(policy="sample", sample_size=size, seed=seed)
    raise FormatError(f"unknown strategy {text!r}")


def _domain_universe(text: str) -> Universe:
    """Universe implied by a domain file: attributes in order of first use."""
    names: list[str] = []
    seen = set()
    for raw in text.splitlines():
        stripped = raw.split("#", 1)[0].strip()
        if not stripped or stripped.split()[0] == "expert":
            continue
        for token in stripped.split():
            if token not in seen:
                seen.add(token)
                names.append(token)
    if not names:
        raise FormatError("domain file lists no blocks")
    return Universe(names)


class TerminalExpert:
    """Interactive full-domain expert reading verdicts from a stream."""

    def __init__(self, universe: Universe, stream=None, out=None):
        self.universe = universe
        self.stream = stream if stream is not None else sys.stdin
        self.out = out if out is not None else sys.stdout

    def _say(self, text: str) -> None:
        print(text, file=self.out, flush=True)

    def answer(self, query: Implication) -> ExpertAnswer:
        self._say(f"query: {format_implication(query)}")
        self._say("  a = accept, n = unknown, r <name> +attr -attr ... = refute")
        while True:
            self._say("> ")
            line = self.stream.readline()
            if not line:
                raise FormatError("input ended during exploration")
            tokens = line.split()
            if not tokens:
                continue
            if tokens[0] == "a":
                return ExpertAnswer.accept()
            if tokens[0] == "n":
                return ExpertAnswer.null()
            if tokens[0] != "r" or len(tokens) < 2:
                self._say("  expected: a | n | r <name> +attr -attr ...")
                continue
            try:
                answer = self._parse_refute(query, tokens)
            except ConsortexError as exc:
                self._say(f"  rejected: {exc}")
                continue
            return answer

    def _parse_refute(self, query: Implication, tokens: list[str]) -> ExpertAnswer:
        name = tokens[1]
        present = self.universe.empty()
        absent = self.universe.empty()
        for token in tokens[2:]:
            if token.startswith("+"):
                present = present.add(token[1:])
            elif token.startswith("-"):
                absent = absent.add(token[1:])
            else:
                raise FormatError(f"expected +attr or -attr, got {token!r}")
        if present.mask & absent.mask:
            raise FormatError("present and absent overlap")
        if not query.premise <= present:
            raise FormatError("counterexample must contain the premise")
        if not (query.conclusion.mask & ~query.premise.mask) & absent.mask:
            raise FormatError("counterexample does not refute the conclusion")
        return ExpertAnswer.refute(present, present | absent, name, expert=0)


def _cmd_base(args: argparse.Namespace) -> int:
    ctx = parse_burmeister(_read(args.context))
    base = canonical_base(all_intents(ctx))
    for imp in base:
        print(format_implication(imp))
    return 0


def _cmd_explore(args: argparse.Namespace) -> int:
    ctx = parse_burmeister(_read(args.context))
    universe = ctx.universe
    target = all_intents(ctx)
    options = ExploreOptions(combining=args.combine)
    if args.interactive:
        if args.consortium:
            raise FormatError("--interactive explores as a single full-domain expert")
        answerer = TerminalExpert(universe)
    elif args.consortium:
        domain, pre = parse_domain(_read(args.consortium), universe)
        strategy = _parse_strategy(args.strategy, args.seed)
        mode = Mode.STRONG if args.mode == "strong" else Mode.SAMPLED
        consortium = consortium_from_domain(domain, pre, ctx, mode, strategy)
        answerer = ConsortiumOracle(consortium, target, ctx)
    else:
        answerer = FullDomainOracle(target, ctx)
    report = explore(answerer, universe, options)
    print(report.serialize(), end="")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = parse_config(_read(args.config))
    result = run_simulation(config)
    print(result.serialize(), end="")
    return 0


def _cmd_cover_check(args: argparse.Namespace) -> int:
    text = _read(args.domain)
    if args.context:
        universe = parse_burmeister(_read(args.context)).universe
    else:
        universe = _domain_universe(text)
    domain, _ = parse_domain(text, universe)
    ok, witness = can_reconstruct_class(domain, args.k)
    print(f"k = {args.k}")
    print(f"reconstructs = {'yes' if ok else 'no'}")
    if witness is not None:
        print("witness = " + " ".join(witness.names))
    return 0


def _cmd_steiner_check(args: argparse.Namespace) -> int:
    text = _read(args.domain)
    if args.context:
        universe = parse_burmeister(_read(args.context)).universe
    else:
        universe = _domain_universe(text)
    domain, _ = parse_domain(text, universe)
    print(f"t = {args.t}")
    print(f"steiner = {'yes' if is_steiner_system(domain, args.t) else 'no'}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import run_server

    server = run_server(args.host, args.port, args.log, args.console_dir)
    host, port = server.server_address[:2]
    print(f"listening on http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="consortex",
        description="Collaborative attribute exploration with consortia of local experts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("base", help="print the canonical implication base of a context")
    p.add_argument("context", help="context file (Burmeister .cxt)")
    p.set_defaults(func=_cmd_base)

    p = sub.add_parser("explore", help="run an exploration against an oracle or a human")
    p.add_argument("context", help="context file (Burmeister .cxt)")
    p.add_argument("--consortium", help="domain file of expert blocks")
    p.add_argument("--strategy", default="all", help="all | first | max-block | cost:<c0,c1,...> | sample:<k>")
    p.add_argument("--mode", choices=("strong", "sampled"), default="strong")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--combine", action=argparse.BooleanOptionalAction, default=True, help="merge views of same-named counterexamples")
    p.add_argument("--interactive", action="store_true", help="answer queries on the terminal")
    p.set_defaults(func=_cmd_explore)

    p = sub.add_parser("simulate", help="run a batch of random consortial explorations")
    p.add_argument("config", help="key = value config file")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("cover-check", help="check that targets of premise complexity <= k reconstruct")
    p.add_argument("domain", help="domain file of expert blocks")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--context", help="context file fixing the attribute universe")
    p.set_defaults(func=_cmd_cover_check)

    p = sub.add_parser("steiner-check", help="check the block family for the Steiner property")
    p.add_argument("domain", help="domain file of expert blocks")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--context", help="context file fixing the attribute universe")
    p.set_defaults(func=_cmd_steiner_check)

    p = sub.add_parser("serve", help="start the collaborative session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--log", help="append-only event log for resume")
    p.add_argument("--console-dir", help="static directory served at /console")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ConsortexError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
