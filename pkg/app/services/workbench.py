import logging
from typing import Any, Dict, Optional, Tuple

from app.analysis.bisim import BisimScheme, bisim
from app.analysis.fairness import (
    fair_lasso_lts,
    fair_member_lts,
    fair_words_lts,
    find_fair_lasso,
    format_word,
    parse_word,
)
from app.analysis.lts import Lts, Verdict, explore, is_deterministic, net_lts
from app.analysis.traces import (
    compare_refusal_traces,
    format_trace,
    has_refusal_trace_lts,
    parse_trace,
    refusal_traces_lts,
)
from app.core.errors import ParseError, WrongLanguage, format_path
from app.core.predicates import (
    is_read_guarded,
    is_read_proper,
    is_rec_proper,
    proper_violation,
    rnf_violation,
    sort,
    summarize,
)
from app.core.terms import Language, Term, language_of, size
from app.semantics import sos_r, sos_s
from app.semantics.refusal import RefusalSet
from app.services.reference_suite import run_suite
from app.syntax.parser import parse
from app.syntax.printer import print_term
from app.transform.laws import LawId, apply_law, parse_path
from app.transform.normalize import normalize_to_rnf
from app.transform.petri import check_safe, load_net, petri_to_s
from app.transform.translate import r_to_s, s_to_r

logger = logging.getLogger(__name__)

SCHEMA = 1


def _document(**fields: Any) -> Dict[str, Any]:
    return {"schema": SCHEMA, **fields}


def _violation_dict(violation) -> Optional[Dict[str, Any]]:
    if violation is None:
        return None
    return {
        "predicate": violation.predicate,
        "path": format_path(violation.path),
        "subterm": print_term(violation.subterm),
        "reason": violation.reason,
    }


class WorkbenchService:
    """Operations shared by the command line and the HTTP API; every result is a JSON-ready document."""

    @staticmethod
    def load(text: str, language: Optional[str] = None) -> Tuple[Term, Language]:
        """
        Parse a program and settle its language.

        Args:
            text (str): term or equation program
            language (str): "r", "s" or None to infer it from the read constructs

        Returns:
            tuple: the closed term and its language
        """
        requested = Language(language) if language else None
        program = parse(text, requested)
        resolved = requested or program.language or language_of(program.term)
        if resolved is Language.S:
            violation = proper_violation(program.term)
            if violation is not None:
                logger.warning(f"Start term {print_term(program.term)} is not proper: {violation.describe()}")
        return program.term, resolved

    @staticmethod
    def parse_check(text: str, language: Optional[str] = None) -> Dict[str, Any]:
        requested = Language(language) if language else None
        program = parse(text, requested)
        resolved = requested or program.language or language_of(program.term)
        return _document(
            language=resolved.value,
            term=print_term(program.term),
            equations=[equation.name for equation in program.equations],
            size=size(program.term),
            sort=sorted(sort(program.term)),
        )

    @staticmethod
    def steps(text: str, language: Optional[str] = None) -> Dict[str, Any]:
        term, resolved = WorkbenchService.load(text, language)
        found = sos_s.steps_s(term) if resolved is Language.S else sos_r.steps(term)
        rendered = sorted(
            (
                {"label": label.to_dict(), "text": str(label), "target": print_term(target)}
                for label, target in found
            ),
            key=lambda item: (item["text"], item["target"]),
        )
        return _document(language=resolved.value, term=print_term(term), steps=rendered)

    @staticmethod
    def time(text: str, language: Optional[str] = None, refusal: Optional[str] = None) -> Dict[str, Any]:
        """
        Time step of a term: the maximal refusal set, or a check of one given refusal set.

        Args:
            text (str): term program
            language (str): "r", "s" or None
            refusal (str): `1`, `{a,b}` or `-{a}`; None asks for the maximal step

        Returns:
            dict: refusal set and successor, `possible` False when time cannot pass
        """
        term, resolved = WorkbenchService.load(text, language)
        is_s = resolved is Language.S
        if refusal is None:
            step = sos_s.max_refusal_s(term) if is_s else sos_r.max_refusal(term)
            if step is None:
                return _document(term=print_term(term), possible=False)
            refused, target = step
            return _document(
                term=print_term(term),
                possible=True,
                refusal=str(refused),
                full=refused.is_full,
                target=print_term(target),
            )
        try:
            refused = RefusalSet.parse(refusal)
        except ValueError as error:
            raise ParseError(str(error)) from None
        target = sos_s.can_refuse_s(term, refused) if is_s else sos_r.can_refuse(term, refused)
        return _document(
            term=print_term(term),
            refusal=str(refused),
            possible=target is not None,
            target=None if target is None else print_term(target),
        )

    @staticmethod
    def explore_lts(
        text: str,
        language: Optional[str] = None,
        max_states: Optional[int] = None,
        max_depth: Optional[int] = None,
        timed: bool = True,
    ) -> Lts:
        term, resolved = WorkbenchService.load(text, language)
        return explore(term, max_states, max_depth, resolved, timed)

    @staticmethod
    def explore(
        text: str,
        language: Optional[str] = None,
        max_states: Optional[int] = None,
        max_depth: Optional[int] = None,
        timed: bool = True,
    ) -> Dict[str, Any]:
        lts = WorkbenchService.explore_lts(text, language, max_states, max_depth, timed)
        logger.info(f"Explored {len(lts.states)} states")
        return _document(
            truncated=lts.truncated,
            states=len(lts.states),
            edges=len(lts.edges),
            deterministic=is_deterministic(lts),
            lts=lts.to_dict(),
        )

    @staticmethod
    def bisim(
        left: str,
        right: str,
        scheme: str = BisimScheme.R.value,
        language: Optional[str] = None,
        max_states: Optional[int] = None,
        max_depth: Optional[int] = None,
    ) -> Dict[str, Any]:
        """
        Compare two terms for timed bisimilarity.

        Args:
            left (str): first term program
            right (str): second term program, possibly of the other language
            scheme (str): "r" (ordinary and read steps apart), "s" (one action relation) or "untimed"
            language (str): forced language for both sides, None to infer each

        Returns:
            dict: verdict plus a witness when the terms are distinguished
        """
        chosen = BisimScheme(scheme)
        left_term, left_language = WorkbenchService.load(left, language)
        right_term, right_language = WorkbenchService.load(right, language)
        if chosen is BisimScheme.R and Language.S in (left_language, right_language):
            raise WrongLanguage("the r scheme needs two read-action terms; use --scheme s for read-set terms")
        timed = chosen is not BisimScheme.UNTIMED
        left_lts = explore(left_term, max_states, max_depth, left_language, timed)
        right_lts = explore(right_term, max_states, max_depth, right_language, timed)
        result = bisim(left_lts, right_lts, chosen)
        return _document(scheme=chosen.value, **result.to_dict())

    @staticmethod
    def proper(text: str) -> Dict[str, Any]:
        term, _ = WorkbenchService.load(text)
        violation = proper_violation(term)
        return _document(
            predicate="proper",
            verdict=(Verdict.NO if violation else Verdict.YES).value,
            checks={
                "read_guarded": is_read_guarded(term),
                "read_proper": is_read_proper(term),
                "rec_proper": is_rec_proper(term),
            },
            violation=_violation_dict(violation),
        )

    @staticmethod
    def rnf(text: str) -> Dict[str, Any]:
        term, _ = WorkbenchService.load(text, Language.R.value)
        violation = rnf_violation(term)
        summary = summarize(term)
        return _document(
            predicate="rnf",
            verdict=(Verdict.NO if violation else Verdict.YES).value,
            checks={"ra_proper": summary.ra_proper, "rec_proper": summary.rec_proper},
            violation=_violation_dict(violation),
        )

    @staticmethod
    def translate(text: str, direction: str) -> Dict[str, Any]:
        """
        Translate between the two algebras.

        Args:
            text (str): term program
            direction (str): "s2r" (proper read-set term to read prefixes) or "r2s" (RNF term to read sets)

        Returns:
            dict: the translated term in concrete syntax
        """
        if direction == "s2r":
            term, _ = WorkbenchService.load(text, Language.S.value)
            result, target = s_to_r(term), Language.R
        elif direction == "r2s":
            term, _ = WorkbenchService.load(text, Language.R.value)
            result, target = r_to_s(term), Language.S
        else:
            raise ParseError(f"unknown direction {direction!r}; expected s2r or r2s")
        return _document(direction=direction, language=target.value, source=print_term(term), term=print_term(result))

    @staticmethod
    def normalize(text: str) -> Dict[str, Any]:
        term, _ = WorkbenchService.load(text, Language.R.value)
        result = normalize_to_rnf(term)
        return _document(source=print_term(term), term=print_term(result), size=size(result))

    @staticmethod
    def apply_law(text: str, law: str, at: str = "") -> Dict[str, Any]:
        term, _ = WorkbenchService.load(text, Language.R.value)
        law_id = LawId.parse(law)
        result = apply_law(term, law_id, parse_path(at))
        return _document(law=law_id.value, at=at, source=print_term(term), term=print_term(result))

    @staticmethod
    def fair_member(
        text: str, word: str, max_states: Optional[int] = None, max_depth: Optional[int] = None
    ) -> Dict[str, Any]:
        term, resolved = WorkbenchService.load(text)
        lts = explore(term, max_states, max_depth, resolved)
        parsed = parse_word(word)
        verdict = fair_member_lts(lts, parsed)
        logger.info(f"Fair membership of {format_word(parsed) or '<empty>'}: {verdict.value}")
        return _document(word=format_word(parsed), verdict=verdict.value, truncated=lts.truncated)

    @staticmethod
    def fair_words(
        text: str, max_len: int, max_states: Optional[int] = None, max_depth: Optional[int] = None
    ) -> Dict[str, Any]:
        term, resolved = WorkbenchService.load(text)
        lts = explore(term, max_states, max_depth, resolved)
        words = [format_word(word) for word in fair_words_lts(lts, max_len)]
        return _document(max_len=max_len, words=words, truncated=lts.truncated)

    @staticmethod
    def fair_lasso(
        text: str,
        prefix: str = "",
        loop: Optional[str] = None,
        max_len: int = 4,
        max_states: Optional[int] = None,
        max_depth: Optional[int] = None,
    ) -> Dict[str, Any]:
        """
        Check an infinite trace `prefix loop loop ...`, or search the shortest fair one.

        Args:
            text (str): term program
            prefix (str): finite part of the trace
            loop (str): repeated part; None searches up to `max_len` letters

        Returns:
            dict: verdict and the checked or found lasso
        """
        term, resolved = WorkbenchService.load(text)
        lts = explore(term, max_states, max_depth, resolved)
        if loop is not None:
            parsed_prefix, parsed_loop = parse_word(prefix), parse_word(loop)
            verdict = fair_lasso_lts(lts, parsed_prefix, parsed_loop)
        else:
            found = find_fair_lasso(lts, max_len)
            if found is None:
                verdict = Verdict.UNKNOWN if lts.truncated else Verdict.NO
                parsed_prefix, parsed_loop = (), ()
            else:
                verdict = Verdict.YES
                parsed_prefix, parsed_loop = found
        return _document(
            prefix=format_word(parsed_prefix),
            loop=format_word(parsed_loop),
            verdict=verdict.value,
            truncated=lts.truncated,
        )

    @staticmethod
    def traces(
        text: str,
        max_len: int,
        trace: Optional[str] = None,
        max_states: Optional[int] = None,
        max_depth: Optional[int] = None,
    ) -> Dict[str, Any]:
        term, resolved = WorkbenchService.load(text)
        lts = explore(term, max_states, max_depth, resolved)
        if trace is not None:
            parsed = parse_trace(trace)
            verdict = has_refusal_trace_lts(lts, parsed)
            return _document(trace=format_trace(parsed), verdict=verdict.value, truncated=lts.truncated)
        found = [format_trace(item) for item in refusal_traces_lts(lts, max_len)]
        return _document(max_len=max_len, traces=found, truncated=lts.truncated)

    @staticmethod
    def compare_traces(
        left: str,
        right: str,
        max_len: int,
        max_states: Optional[int] = None,
        max_depth: Optional[int] = None,
    ) -> Dict[str, Any]:
        left_term, _ = WorkbenchService.load(left)
        right_term, _ = WorkbenchService.load(right)
        return _document(**compare_refusal_traces(left_term, right_term, max_len, max_states, max_depth))

    @staticmethod
    def import_net(text: str, max_states: Optional[int] = None) -> Dict[str, Any]:
        """
        Translate a safe read-arc net into a read-set term.

        Args:
            text (str): net in the text format or as JSON
            max_states (int): bound for the safety check

        Returns:
            dict: the term, the net's size and whether the term is proper
        """
        net = load_net(text)
        markings = check_safe(net, max_states)
        term = petri_to_s(net, max_states)
        logger.info(f"Imported net with {len(net.places)} places")
        return _document(
            places=list(net.places),
            transitions=list(net.transitions),
            markings=markings,
            term=print_term(term),
            proper=proper_violation(term) is None,
        )

    @staticmethod
    def net_correspondence(text: str, max_states: Optional[int] = None) -> Dict[str, Any]:
        """Untimed bisimilarity between the marking graph of a net and the LTS of its translation."""
        net = load_net(text)
        term = petri_to_s(net, max_states)
        result = bisim(net_lts(net, max_states), explore(term, max_states, timed=False), BisimScheme.UNTIMED)
        return _document(term=print_term(term), **result.to_dict())

    @staticmethod
    def validate_reference() -> Dict[str, Any]:
        return _document(**run_suite())
