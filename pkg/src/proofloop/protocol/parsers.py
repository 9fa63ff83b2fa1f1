"""Strict header-only parsers for agent output documents.

Control tokens are read only from their dedicated sections; prose anywhere
else never influences the result. Malformed control documents come back as
:class:`Escalation` values rather than being coerced into a guess.
"""

from __future__ import annotations

import logging
import re

from ..errors import EmptyDocumentError
from ..state.model import Plan, PlanStep, VerifiedResult
from ..types import Category, TagTally
from .sections import (
    SectionIndex,
    as_text,
    first_line,
    iter_unfenced,
    parse_bullets,
    parse_token,
    strip_fenced,
)
from .types import (
    Assessment,
    Escalation,
    EscalationKind,
    ExplorationDecision,
    ExplorationOutcome,
    InterventionAction,
    MetaIntervention,
    ReplanDecision,
    ReplanTag,
    StructuralError,
    StructuralErrorKind,
    Verdict,
    VerdictTag,
)

log = logging.getLogger(__name__)

MAX_PLAN_STEPS = 20
FORBIDDEN_MIN, FORBIDDEN_MAX = 1, 10
FORBIDDEN_NORM = (3, 6)
FINDINGS_LIMIT = 4000

_VERDICT_ALIASES = {
    "ACCEPT": VerdictTag.ACCEPT,
    "CHALLENGE": VerdictTag.CHALLENGE,
    "TRACE_BACK": VerdictTag.TRACE_BACK,
    "PROPOSE_REPLAN": VerdictTag.PROPOSE_REPLAN,
}


def _malformed(reason: str) -> Escalation:
    return Escalation(EscalationKind.MALFORMED, reason)


def _parse_target(body: str | None) -> int | None:
    """A TRACE_BACK_TO body must be exactly one integer."""
    if body is None:
        return None
    cleaned = re.sub(r"[*`]", "", body).strip()
    if not re.fullmatch(r"\d{1,6}", cleaned):
        return None
    return int(cleaned)


def _check_target(target: int | None, current_step: int, what: str) -> Escalation | None:
    if target is None:
        return _malformed(f"{what} without a parseable target step")
    if not 1 <= target <= current_step:
        return Escalation(
            EscalationKind.OUT_OF_RANGE,
            f"{what} target {target} outside 1..{current_step}",
        )
    return None


def parse_verdict(document, current_step: int) -> Verdict | Escalation:
    text = as_text(document)
    if not text.strip():
        raise EmptyDocumentError("empty verifier output")
    idx = SectionIndex(text)
    notes = [f"duplicate section {n} ignored" for n in idx.duplicates]
    for n in notes:
        log.info(n)

    body = idx.body("VERDICT")
    if body is None:
        return Escalation(EscalationKind.MISSING, "no Verdict section")
    token = parse_token(first_line(body))
    if token is None or token[1] is not None or token[0] not in _VERDICT_ALIASES:
        return _malformed(f"unrecognized verdict {first_line(body)!r}")
    tag = _VERDICT_ALIASES[token[0]]

    gates = {}
    for name in ("GOAL_GATE", "LOGIC_GATE"):
        b = idx.body(name)
        if b is not None:
            gates[name] = b.strip()

    verdict = Verdict(tag=tag, gates=gates, notes=notes)
    if tag is VerdictTag.TRACE_BACK:
        target = _parse_target(idx.body("TRACE_BACK_TO"))
        esc = _check_target(target, current_step, "TRACE_BACK")
        if esc:
            return esc
        verdict.target = target
    elif "TRACE_BACK_TO" in idx:
        verdict.notes.append("TRACE_BACK_TO section ignored for non-trace-back verdict")

    if tag is VerdictTag.ACCEPT:
        verdict.ledger_entries = extract_verified_results(text)
    elif tag is VerdictTag.CHALLENGE:
        obj = idx.body("OBJECTIONS", "CHALLENGES")
        if obj is None:
            obj = "\n\n".join(gates.values()) or None
        verdict.objections = obj.strip() if obj and obj.strip() else None
    return verdict


def parse_replan_decision(document, current_step: int) -> ReplanDecision | Escalation:
    text = as_text(document)
    if not text.strip():
        return Escalation(EscalationKind.MISSING, "empty replan decision")
    idx = SectionIndex(text)
    body = idx.body("REPLAN_DECISION")
    if body is None:
        return Escalation(EscalationKind.MISSING, "no REPLAN_DECISION section")
    token = parse_token(first_line(body))
    if token is None:
        return _malformed(f"unrecognized replan decision {first_line(body)!r}")
    name, inline = token
    reason = (idx.body("REASON_SUMMARY", "REASON") or "").strip()

    if name in ("TRACE_BACK_TO", "TRACE_BACK"):
        target = inline if inline is not None else _parse_target(idx.body("TRACE_BACK_TO"))
        esc = _check_target(target, current_step, "TRACE_BACK_TO")
        if esc:
            return esc
        return ReplanDecision(ReplanTag.TRACE_BACK, reason, target=target)
    if inline is not None:
        return _malformed(f"unexpected number after {name}")
    if name == "CONTINUE":
        return ReplanDecision(ReplanTag.CONTINUE, reason)
    if name == "ABORT":
        return ReplanDecision(ReplanTag.ABORT, reason)
    if name != "APPROVE_REPLAN":
        return _malformed(f"unrecognized replan decision {name!r}")

    plan_summary = (idx.body("PLAN_SUMMARY") or "").strip()
    forbidden = parse_bullets(idx.body("FORBIDDEN_DIRECTIONS"))
    if not reason:
        return _malformed("APPROVE_REPLAN without Reason_Summary")
    if not plan_summary:
        return _malformed("APPROVE_REPLAN without Plan_Summary")
    if not FORBIDDEN_MIN <= len(forbidden) <= FORBIDDEN_MAX:
        return _malformed(f"APPROVE_REPLAN with {len(forbidden)} forbidden directions")
    warnings = []
    lo, hi = FORBIDDEN_NORM
    if not lo <= len(forbidden) <= hi:
        warnings.append(f"{len(forbidden)} forbidden directions (expected {lo}-{hi})")
    return ReplanDecision(
        ReplanTag.APPROVE_REPLAN,
        reason,
        plan_summary=plan_summary,
        forbidden_directions=forbidden,
        reusable_results=parse_bullets(idx.body("REUSABLE_RESULTS")),
        warnings=warnings,
    )


_ACTIONS = {
    "RETRY_STEP": InterventionAction.RETRY_STEP,
    "TRACE_BACK": InterventionAction.TRACE_BACK,
    "PROPOSE_REPLAN": InterventionAction.PROPOSE_REPLAN,
    "APPROVE_REPLAN": InterventionAction.PROPOSE_REPLAN,
    "ABORT": InterventionAction.ABORT,
}


def parse_meta_intervention(document, current_step: int) -> MetaIntervention | Escalation:
    text = as_text(document)
    if not text.strip():
        return Escalation(EscalationKind.MISSING, "empty intervention")
    idx = SectionIndex(text)
    body = idx.body("ACTION_TYPE")
    if body is None:
        return Escalation(EscalationKind.MISSING, "no Action_Type section")
    token = parse_token(first_line(body))
    if token is None or token[0] not in _ACTIONS:
        return _malformed(f"unrecognized action {first_line(body)!r}")
    action = _ACTIONS[token[0]]
    warnings: list[str] = []

    target = None
    if action is InterventionAction.TRACE_BACK:
        target = token[1] if token[1] is not None else _parse_target(idx.body("TRACE_BACK_TO"))
        esc = _check_target(target, current_step, "TRACE_BACK")
        if esc:
            return esc
    elif token[1] is not None:
        return _malformed(f"unexpected number after {token[0]}")

    pure = False
    flag = idx.body("USE_PURE_REASONING")
    if flag is not None:
        value = parse_token(first_line(flag))
        if value and value[0] in ("YES", "NO") and value[1] is None:
            pure = value[0] == "YES"
        else:
            warnings.append(f"Use_Pure_Reasoning value {first_line(flag)!r} read as NO")

    partials = idx.body("EXTRACTED_PARTIALS", "PARTIAL_RESULTS")
    return MetaIntervention(
        action=action,
        target=target,
        guidance=(idx.body("GUIDANCE") or "").strip(),
        use_pure_reasoning=pure,
        extracted_partials=partials.strip() if partials and partials.strip() else None,
        diagnosis=(idx.body("DIAGNOSIS") or "").strip(),
        warnings=warnings,
    )


def _clip(text: str, limit: int = FINDINGS_LIMIT) -> str:
    text = text.strip()
    return text if len(text) <= limit else text[:limit].rstrip() + "\n[...]"


def parse_exploration(document) -> ExplorationOutcome:
    text = as_text(document)
    idx = SectionIndex(text)
    assessment = Assessment.UNKNOWN
    token = parse_token(first_line(idx.body("ASSESSMENT")))
    if token and token[1] is None:
        try:
            assessment = Assessment(token[0])
        except ValueError:
            pass
    findings = idx.body("FINDINGS")
    if findings is None:
        lines = text.splitlines()
        sec = idx.get("ASSESSMENT")
        if sec is not None:
            lines = lines[: sec.line] + lines[sec.end :]
        findings = "\n".join(lines)
    return ExplorationOutcome(assessment, _clip(findings))


def parse_exploration_decision(document) -> ExplorationDecision:
    """Meta's call after a partial exploration round; defaults to planning."""
    token = parse_token(first_line(SectionIndex(document).body("EXPLORATION_DECISION")))
    if token and token[1] is None and token[0] == "CONTINUE_EXPLORATION":
        return ExplorationDecision.CONTINUE_EXPLORATION
    return ExplorationDecision.PROCEED_TO_PLAN


_STEP_HEADER = re.compile(r"^#{2,4}[ \t]+(?:\*\*)?Step[ \t]+(\d{1,4})(?:\*\*)?[ \t]*[:.)\-]?[ \t]*(.*?)[ \t#]*$",
                          re.IGNORECASE)
_STEP_ITEM = re.compile(r"^(?:\*\*)?(?:Step[ \t]+)?(\d{1,4})[.):](?:\*\*)?[ \t]+(.*)$", re.IGNORECASE)


def _clean_goal(goal: str) -> str:
    return re.sub(r"\*\*", "", goal).strip()


def parse_plan(document, version: int = 1, max_steps: int = MAX_PLAN_STEPS) -> Plan | StructuralError:
    """Extract numbered steps and check structure only."""
    text = as_text(document)
    found: list[tuple[int, str]] = []
    for line, fenced in iter_unfenced(text):
        if not fenced:
            m = _STEP_HEADER.match(line)
            if m:
                found.append((int(m.group(1)), _clean_goal(m.group(2))))
    if not found:
        idx = SectionIndex(text)
        region = idx.body("PLAN", "STEPS")
        if region is None:
            region = text
        for line, fenced in iter_unfenced(region):
            if not fenced:
                m = _STEP_ITEM.match(line)
                if m:
                    found.append((int(m.group(1)), _clean_goal(m.group(2))))

    if not found:
        return StructuralError(StructuralErrorKind.EMPTY, "no numbered steps")
    numbers = [n for n, _ in found]
    if len(found) > max_steps:
        return StructuralError(StructuralErrorKind.TOO_MANY_STEPS, f"{len(found)} steps > {max_steps}")
    if len(set(numbers)) != len(numbers):
        dup = sorted({n for n in numbers if numbers.count(n) > 1})
        return StructuralError(StructuralErrorKind.DUPLICATE, f"duplicate step numbers {dup}")
    if numbers != list(range(1, len(numbers) + 1)):
        return StructuralError(StructuralErrorKind.NON_CONTIGUOUS, f"step numbers {numbers}")
    return Plan(version, [PlanStep(n, g) for n, g in found])


_TAGS = {
    "verified": re.compile(r"\[verified\]"),
    "easy_verify": re.compile(r"\[easy-verify\]"),
    "hard_verify": re.compile(r"\[hard-verify\]"),
}


def extract_tags(document) -> TagTally:
    body = strip_fenced(as_text(document))
    return TagTally(**{k: len(rx.findall(body)) for k, rx in _TAGS.items()})


def detect_plan_blocked(document) -> bool:
    return "[plan-blocked]" in strip_fenced(as_text(document))


_ENTRY = re.compile(
    r"^[ \t]*(?:[-*+][ \t]+)?(?:\*\*|\*)?\[(Lemma|Conjecture|Computation|Definition|Answer)\](?:\*\*|\*)?[ \t]*(.*)$",
    re.IGNORECASE,
)
_ANY_BULLET = re.compile(r"^[ \t]*[-*+][ \t]+\S")
_CATEGORIES = {c.value.lower(): c for c in Category}


def extract_verified_results(document) -> list[VerifiedResult]:
    """Ledger entries from the Verified Results section, one per tagged item."""
    body = SectionIndex(document).body("VERIFIED_RESULTS", "VERIFIED_RESULTS_LEDGER")
    if body is None:
        return []
    entries: list[list] = []
    open_entry = False
    for line, fenced in iter_unfenced(body):
        if fenced:
            continue
        m = _ENTRY.match(line)
        if m:
            entries.append([_CATEGORIES[m.group(1).lower()], m.group(2).strip()])
            open_entry = True
        elif _ANY_BULLET.match(line):
            log.warning("dropping untagged ledger bullet: %s", line.strip()[:80])
            open_entry = False
        elif not line.strip():
            open_entry = False
        elif open_entry:
            entries[-1][1] = f"{entries[-1][1]} {line.strip()}".strip()
    return [VerifiedResult(category=c, text=t) for c, t in entries]
