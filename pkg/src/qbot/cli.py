"""Command-line entry point.

Subcommands: verify (controller against its behavior table), decompose
(multi-controlled NOT lowering), sim (run a circuit file on a basis input),
run (headless episode), serve (line-JSON protocol server), export (write the
lowered controller as circuit text).

Exit codes: 0 success, 1 verification/validation failure, 2 bad input.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys
from pathlib import Path

from . import qasm, service
from .core import RegisterMap, bits_to_str, run_basis, str_to_bits
from .decompose import lower_circuit, plan_circuit, verify_equivalence
from .errors import (
    CapacityError,
    ParseError,
    QbotError,
    StructuralError,
)
from .session import EpisodeConfig, FirstClear, Scripted, dump_trace, run_to_completion
from .synth import (
    ControlOutcome,
    MotorState,
    SensorWord,
    build_controller,
    builtin_table,
    evaluate,
    format_table_iv,
    synthesize,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


def _expected_outcome(row: tuple[int, ...]) -> ControlOutcome:
    return ControlOutcome(
        ml=MotorState((row[0], row[1])),
        mr=MotorState((row[2], row[3])),
        mu=bool(row[4]),
        ask=bool(row[5]),
    )


def cmd_verify(args) -> int:
    table = builtin_table()
    circuit = synthesize(table, RegisterMap.robot_13q(), omit_segments=args.omit_segment)
    lowered = lower_circuit(circuit)
    rows = []
    all_pass = True
    for ket in range(16):
        # Display kets in binary order of the printed string S1 S2 S3 S4.
        text = format(ket, "04b")
        word = SensorWord.from_string(text)
        expected = format_table_iv(_expected_outcome(table.lookup(word.bits)))
        computed = format_table_iv(evaluate(lowered, word))
        ok = computed == expected
        all_pass = all_pass and ok
        rows.append({"input": text, "expected": expected, "computed": computed, "pass": ok})
    if args.format == "json":
        print(json.dumps(rows, indent=2))
    else:
        for row in rows:
            flag = "PASS" if row["pass"] else "FAIL"
            print(f"|{row['input']}>  expected {row['expected']}  computed {row['computed']}  {flag}")
        passed = sum(1 for r in rows if r["pass"])
        print(f"{passed}/16 PASS")
    return EXIT_OK if all_pass else EXIT_FAIL


def cmd_decompose(args) -> int:
    if args.verify:
        report = verify_equivalence(args.controls)
        matches = sum(1 for c in report.cases if c.ok)
        if args.format == "json":
            print(
                json.dumps(
                    {
                        "k": report.k,
                        "cases": len(report.cases),
                        "matches": matches,
                        "passed": report.passed,
                    }
                )
            )
        else:
            for case in report.cases:
                flag = "PASS" if case.ok else "FAIL"
                controls = bits_to_str(case.control_bits)
                print(
                    f"controls {controls}  target {case.target_in} -> {case.target_out} "
                    f"(want {case.target_expected})  ancillas "
                    f"{'clean' if case.ancillas_clean else 'DIRTY'}  {flag}"
                )
            print(f"k={report.k}: {matches}/{len(report.cases)} match")
        return EXIT_OK if report.passed else EXIT_FAIL
    text = qasm.emit(plan_circuit(args.controls))
    if args.emit:
        Path(args.emit).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_sim(args) -> int:
    circuit = qasm.parse(Path(args.circuit).read_text())
    bits = str_to_bits(args.input)
    if len(bits) != circuit.num_qubits:
        raise StructuralError(
            f"input has {len(bits)} bits, circuit has {circuit.num_qubits} qubits"
        )
    out = run_basis(circuit, bits)
    actuators = None
    if args.registers:
        registers = RegisterMap.from_json(json.loads(Path(args.registers).read_text()))
        if registers.min_qubits > circuit.num_qubits:
            raise StructuralError("register map does not fit the circuit")
        ml = MotorState.from_bits(out[registers.ml[0]], out[registers.ml[1]])
        mr = MotorState.from_bits(out[registers.mr[0]], out[registers.mr[1]])
        actuators = format_table_iv(
            ControlOutcome(ml=ml, mr=mr, mu=bool(out[registers.mu]), ask=bool(out[registers.ask]))
        )
    if args.format == "json":
        print(json.dumps({"output": bits_to_str(out), "actuators": actuators}))
    else:
        print(bits_to_str(out))
        if actuators is not None:
            print(actuators)
    return EXIT_OK


def _parse_policy(text: str):
    if text == "first-clear":
        return FirstClear()
    if text.startswith("script:"):
        letters = text[len("script:"):]
        if not letters:
            raise StructuralError("script policy needs at least one direction letter")
        return Scripted(letters)
    raise StructuralError(f"unknown policy {text!r}; use first-clear or script:FBLR...")


def cmd_run(args) -> int:
    config = EpisodeConfig(
        map_text=Path(args.map).read_text(),
        max_steps=args.max_steps,
        ask_policy=_parse_policy(args.policy),
        seed=args.seed,
    )
    trace = run_to_completion(config)
    if args.trace:
        Path(args.trace).write_text(dump_trace(trace))
    status = trace.final_status.value if trace.final_status else "RUNNING"
    if args.format == "json":
        print(json.dumps({"status": status, "steps": len(trace.records), "trace": args.trace}))
    else:
        for record in trace.records:
            choice = f" ask={record.ask_choice.value}" if record.ask_choice else ""
            print(f"step {record.step}: sensors {record.sensors} -> {record.output} "
                  f"{record.action.value}{choice}")
        print(f"status {status} after {len(trace.records)} step(s)")
    return EXIT_OK


def cmd_serve(args) -> int:
    try:
        asyncio.run(service.serve(host=args.host, port=args.port, ws_port=args.ws_port))
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def cmd_export(args) -> int:
    controller = build_controller(lowered=True)
    text = qasm.emit(controller)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.registers:
        Path(args.registers).write_text(
            json.dumps(RegisterMap.robot_13q().to_json(), indent=2) + "\n"
        )
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qbot", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="check the controller against its behavior table")
    p_verify.add_argument("--format", choices=["text", "json"], default="text")
    p_verify.add_argument(
        "--omit-segment",
        type=int,
        action="append",
        default=[],
        metavar="N",
        help="fault-injection hook: drop the Nth emitted segment",
    )
    p_verify.set_defaults(func=cmd_verify)

    p_dec = sub.add_parser("decompose", help="lower a multi-controlled NOT to CCX/CX")
    p_dec.add_argument("--controls", type=int, required=True, metavar="K")
    p_dec.add_argument("--emit", metavar="FILE", help="write the lowered plan as circuit text")
    p_dec.add_argument("--verify", action="store_true", help="sweep all basis inputs instead")
    p_dec.add_argument("--format", choices=["text", "json"], default="text")
    p_dec.set_defaults(func=cmd_decompose)

    p_sim = sub.add_parser("sim", help="run a circuit file on a basis input")
    p_sim.add_argument("circuit", help="circuit text file (OPENQASM 2.0 subset)")
    p_sim.add_argument("--input", required=True, metavar="BITS", help="basis bits, q0 first")
    p_sim.add_argument("--registers", metavar="FILE", help="register map sidecar (JSON)")
    p_sim.add_argument("--format", choices=["text", "json"], default="text")
    p_sim.set_defaults(func=cmd_sim)

    p_run = sub.add_parser("run", help="run a headless episode on a map")
    p_run.add_argument("--map", required=True, metavar="FILE")
    p_run.add_argument("--policy", default="first-clear", metavar="first-clear|script:FBL...")
    p_run.add_argument("--max-steps", type=int, default=1000)
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--trace", metavar="OUT.jsonl", help="write the trace as JSON lines")
    p_run.add_argument("--format", choices=["text", "json"], default="text")
    p_run.set_defaults(func=cmd_run)

    default_port = int(os.environ.get("QBOT_PORT", service.DEFAULT_PORT))
    p_serve = sub.add_parser("serve", help="serve the line-JSON episode protocol")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=default_port,
                         help="TCP port (default from QBOT_PORT, else 8765); 0 picks a free one")
    p_serve.add_argument("--ws-port", type=int, default=None,
                         help="also serve WebSocket clients on this port")
    p_serve.set_defaults(func=cmd_serve)

    p_exp = sub.add_parser("export", help="write the lowered controller as circuit text")
    p_exp.add_argument("--out", metavar="FILE", help="output path (default: stdout)")
    p_exp.add_argument("--registers", metavar="FILE", help="also write the register map sidecar")
    p_exp.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, CapacityError, StructuralError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except QbotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
