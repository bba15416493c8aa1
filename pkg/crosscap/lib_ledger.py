# -*- coding: utf-8 -*-
"""
Library for proof scripts: derivation steps, the membership ledger and the
replay of a script at a given genus.

A script is a parset file under ``data/proofs``. Its global section states
the theorem (genus constraint, hypotheses, targets), ``[_defs]`` binds named
words and every other section is one derivation step::

    [C1C2]
    kind = membership
    lhs = T (B[1] B[2]^-1) T^-1
    rhs = C[1] C[2]^-1
    justification = hypothesis, T_b1b2
    anchor = C_1C_2^{-1} in G

Step kinds are ``identity``, ``mapsto``, ``membership``, ``involution`` and
``lemma`` (replay another script inside the current ledger).
"""
import re
from dataclasses import dataclass, field, replace
from importlib import resources

from .lib_gf2 import GF2Vector, apply, mat_inverse, mat_mul
from .lib_io import ParsetParser, logger, progress
from .lib_surface import GenusError, curve_class
from .lib_words import (Factor, Word, UndefinedWordError, eval_expr, expand_words,
                        evaluate, parse_curves, parse_word)

STEP_KINDS = ('identity', 'mapsto', 'membership', 'involution', 'lemma')
_STEP_KEYS = ['kind', 'lhs', 'rhs', 'source', 'name', 'when', 'forall', 'justification', 'anchor', 'note']
_RANGE_RE = re.compile(r'^\s*(\w+)\s+in\s+(.+?)\s*\.\.\s*(.+?)\s*$')


class ScriptError(ValueError):
    """Proof script data is malformed."""


class UnsupportedGenusError(GenusError):
    """The theorem does not claim anything at this genus."""


def _range(text, env):
    m = _RANGE_RE.match(text)
    if m is None:
        raise ScriptError('cannot read range %r (expected "i in lo .. hi")' % text)
    var = m.group(1)
    lo, hi = eval_expr(m.group(2), env), eval_expr(m.group(3), env)
    return [dict(env, **{var: i}) for i in range(lo, hi + 1)]


@dataclass(frozen=True)
class DerivationStep():
    """
    One line of a proof.

    For ``mapsto`` steps ``source`` and ``rhs`` are curve tuples, for
    ``lemma`` steps ``lhs`` is the id of the replayed script.
    ``anchor`` quotes the source text the step checks; ``note`` records how
    the step reads it where the two differ.
    """
    id: str
    kind: str
    lhs: str
    rhs: str = ''
    source: str = ''
    name: str = None
    when: str = None
    forall: str = None
    justification: tuple = ()
    anchor: str = ''
    note: str = ''

    def active(self, cfg):
        return self.when is None or bool(eval_expr(self.when, cfg.variables()))

    def instances(self, cfg):
        """Variable bindings the step is checked under, one per family member."""
        env = cfg.variables()
        if self.forall is None:
            return [env]
        return _range(self.forall, env)


@dataclass
class ProofScript():
    id: str
    statement: str
    genus_min: int
    parity: str
    hypotheses: list
    targets: list
    steps: list
    transposition: list = field(default_factory=list)
    defs: dict = field(default_factory=dict)
    filename: str = ''

    @classmethod
    def load(cls, parsetFile):
        parser = ParsetParser(parsetFile)
        g = '_global'
        defs = dict(parser.items('_defs')) if parser.has_section('_defs') else {}
        steps = []
        for s in parser.steps():
            parser.checkSpelling(s, _STEP_KEYS)
            kind = parser.getstr(s, 'kind')
            if kind not in STEP_KINDS:
                raise ScriptError('%s: step %s has unknown kind %r' % (parsetFile, s, kind))
            steps.append(DerivationStep(
                id=s, kind=kind, lhs=parser.getstr(s, 'lhs'),
                rhs=parser.getstr(s, 'rhs', ''), source=parser.getstr(s, 'source', ''),
                name=parser.getstr(s, 'name', '') or None,
                when=parser.getstr(s, 'when', '') or None,
                forall=parser.getstr(s, 'forall', '') or None,
                justification=tuple(parser.getarray(s, 'justification', [])),
                anchor=parser.getstr(s, 'anchor', ''), note=parser.getstr(s, 'note', '')))
        script = cls(id=parser.getstr(g, 'script'), statement=parser.getstr(g, 'statement', ''),
                     genus_min=parser.getint(g, 'genus_min'), parity=parser.getstr(g, 'parity', 'any'),
                     hypotheses=parser.getwords(g, 'hypotheses'), targets=parser.getwords(g, 'targets'),
                     transposition=parser.getwords(g, 'transposition', []), steps=steps, defs=defs,
                     filename=str(parsetFile))
        script.validate()
        return script

    def validate(self):
        """Step ids unique, kinds complete, justifications refer backwards."""
        if self.parity not in ('any', 'even', 'odd'):
            raise ScriptError('%s: parity must be any, even or odd' % self.id)
        known = {'hypothesis'} | set(self.defs)
        ids = set()
        for step in self.steps:
            if step.id in ids:
                raise ScriptError('%s: duplicate step id %s' % (self.id, step.id))
            ids.add(step.id)
            if step.kind == 'mapsto' and not (step.source and step.rhs):
                raise ScriptError('%s: mapsto step %s needs source and rhs' % (self.id, step.id))
            if step.kind == 'identity' and not step.rhs:
                raise ScriptError('%s: identity step %s needs rhs' % (self.id, step.id))
            for j in step.justification:
                if j not in known:
                    raise ScriptError('%s: step %s justified by unknown %r' % (self.id, step.id, j))
            known.add(step.id)
            if step.kind == 'lemma':
                known.add(step.lhs)
            if step.name:
                known.add(step.name)

    def check_genus(self, cfg):
        if cfg.g < self.genus_min:
            raise UnsupportedGenusError('%s holds for g >= %i, not g = %i' % (self.id, self.genus_min, cfg.g))
        if self.parity == 'even' and not cfg.even or self.parity == 'odd' and cfg.even:
            raise UnsupportedGenusError('%s needs %s genus, not g = %i' % (self.id, self.parity, cfg.g))

    def step(self, step_id):
        for s in self.steps:
            if s.id == step_id:
                return s
        raise KeyError(step_id)

    def named_words(self, cfg):
        names = {}
        for name, text in self.defs.items():
            w = parse_word(text, cfg.variables(), names)
            names[name] = Word(w.factors, name=name)
        return names

    def bound_words(self, cfg):
        """
        `named_words` plus the words bound by named steps, in file order, as
        a replay binds them. A step checked for a family binds its first
        member.
        """
        names = self.named_words(cfg)
        for step in self.steps:
            if step.name and step.kind != 'lemma' and step.active(cfg):
                envs = step.instances(cfg)
                w = parse_word(step.lhs, envs[0] if envs else cfg.variables(), names)
                names[step.name] = Word(w.factors, name=step.name)
        return names


# Script registry
#################

def _proof_file(name):
    return resources.files('crosscap').joinpath('data', 'proofs', name)


def manifest():
    """
    Proof manifest: script id -> dict(file, steps, alias).
    """
    parser = ParsetParser(_proof_file('manifest.parset'))
    return {s: {'file': parser.getstr(s, 'file'), 'steps': parser.getint(s, 'steps'),
                'alias': parser.getstr(s, 'alias')} for s in parser.steps()}


_SCRIPTS = {}


def load_script(script_id):
    """Load a shipped script by id (``THM21``) or alias (``2.1``)."""
    entries = manifest()
    for sid, entry in entries.items():
        if script_id in (sid, entry['alias']):
            if sid not in _SCRIPTS:
                _SCRIPTS[sid] = ProofScript.load(_proof_file(entry['file']))
            return _SCRIPTS[sid]
    raise ScriptError('unknown proof script %r' % script_id)


# Ledger
########

class MembershipLedger():
    """
    Images already shown to lie in the subgroup, keyed by matrix digest.
    A matrix counts as established when it or its inverse was registered.
    """
    def __init__(self, cfg):
        self.cfg = cfg
        self._origin = {}

    def establish(self, matrix, origin):
        matrix = getattr(matrix, 'matrix', matrix)
        self._origin.setdefault(matrix.digest(), origin)
        self._origin.setdefault(mat_inverse(matrix).digest(), origin)

    def origin(self, matrix):
        matrix = getattr(matrix, 'matrix', matrix)
        return self._origin.get(matrix.digest())

    def __contains__(self, matrix):
        return self.origin(matrix) is not None

    def __len__(self):
        return len(set(self._origin.values()))

    def unresolved(self, word):
        """
        Letters of ``word`` not accounted for by the ledger. Groups and named
        words are accepted whole when established, otherwise through their
        own letters.
        """
        if not word.factors or evaluate(word, self.cfg).matrix in self:
            return []
        missing = []
        for f in word.factors:
            base = f.base
            if isinstance(base, Word):
                missing += self.unresolved(base)
            elif evaluate(Word((Factor(base),)), self.cfg).matrix not in self:
                missing.append(str(base))
        return missing


# Checks
########

def _as_word(w, cfg, names=None):
    return parse_word(w, cfg.variables(), names) if isinstance(w, str) else w


def check_identity(lhs, rhs, cfg):
    """Both words have the same image."""
    return evaluate(_as_word(lhs, cfg), cfg).matrix == evaluate(_as_word(rhs, cfg), cfg).matrix


def check_mapsto(word, sources, targets, cfg):
    """The image of ``word`` sends the class of every source curve to its target."""
    m = evaluate(_as_word(word, cfg), cfg).matrix
    if len(sources) != len(targets):
        raise ScriptError('mapsto needs as many sources as targets')
    return all(apply(m, curve_class(s, cfg)) == curve_class(t, cfg) for s, t in zip(sources, targets))


def check_involution(word, cfg):
    m = evaluate(_as_word(word, cfg), cfg).matrix
    return mat_mul(m, m).is_identity()


def _transvection_vectors(word, cfg):
    """
    Vectors v with ``word`` the product of the transvections t_v, one per
    twist or transposition letter; None if some letter is neither.
    """
    out = []
    for f in word.factors:
        if f.exponent not in (1, -1):
            return None
        if isinstance(f.base, Word):
            inner = _transvection_vectors(f.base if f.exponent == 1 else f.base.inverse(), cfg)
            if inner is None:
                return None
            out += inner
        elif f.base.kind == 'twist':
            out.append(curve_class(f.base.curve, cfg))
        elif f.base.kind in ('u', 'v'):
            # a crosscap swap is the transvection along mu_i + mu_j
            i = f.base.index
            j = i + 1 if f.base.kind == 'u' else i + 2
            if not 1 <= i < j <= cfg.g:
                return None
            out.append(GF2Vector.from_support(cfg.g, (i, j)))
        else:
            return None
    return out


def conjugation_shadow(step, cfg, env=None, names=None):
    """
    For a step ``X Y X^-1 = Z`` with Y and Z products of twists and crosscap
    transpositions, check that X maps the vector of each letter of Y to the
    vector of the matching letter of Z. Returns None when the step does not
    have that shape.

    Passing implies the identity (X t_v X^-1 = t_Xv for an isometry X). The
    converse does not hold: a product of transpositions sharing a crosscap
    can agree with the right-hand side although the vectors are permuted.

    Parameters
    ----------
    step : DerivationStep
    cfg : GenusConfig
    env : dict, optional
        Variable binding, the genus variables by default.
    names : dict, optional
        Named words, see `ProofScript.bound_words`.
    """
    if step.kind not in ('membership', 'identity') or not step.rhs:
        return None
    env = env or cfg.variables()
    try:
        lhs = parse_word(step.lhs, env, names)
        rhs = parse_word(step.rhs, env, names)
    except UndefinedWordError:
        return None
    fs = lhs.factors
    if len(fs) != 3 or fs[0].base != fs[2].base or fs[0].exponent != -fs[2].exponent:
        return None
    try:
        inner, outer = _transvection_vectors(Word((fs[1],)), cfg), _transvection_vectors(rhs, cfg)
    except ValueError:
        return None
    if inner is None or outer is None or len(inner) != len(outer):
        return None
    m = evaluate(Word((fs[0],)), cfg).matrix
    return all(apply(m, x) == y for x, y in zip(inner, outer))


# Replay
########

@dataclass
class Verdict():
    step_id: str
    kind: str
    passed: bool
    anchor: str = ''
    detail: str = ''
    instances: int = 1
    lhs_digest: str = None
    rhs_digest: str = None
    note: str = ''

    def to_dict(self):
        return {'id': self.step_id, 'kind': self.kind, 'passed': self.passed, 'anchor': self.anchor,
                'detail': self.detail, 'instances': self.instances,
                'lhs_digest': self.lhs_digest, 'rhs_digest': self.rhs_digest, 'note': self.note}


@dataclass
class ProofReport():
    script: str
    genus: int
    statement: str = ''
    verdicts: list = field(default_factory=list)
    established: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def passed(self):
        return bool(self.verdicts) and all(v.passed for v in self.verdicts)

    @property
    def failures(self):
        return [v for v in self.verdicts if not v.passed]


class _Replay():
    """State of one script replay."""

    def __init__(self, script, cfg, ledger, prefix):
        self.script = script
        self.cfg = cfg
        self.ledger = ledger
        self.prefix = prefix
        self.names = script.named_words(cfg)

    def word(self, text, env):
        return parse_word(text, env, self.names)

    def check(self, step, env):
        """Returns (passed, detail, lhs matrix, rhs matrix)."""
        cfg = self.cfg
        if step.kind == 'mapsto':
            m = evaluate(self.word(step.lhs, env), cfg).matrix
            sources, targets = parse_curves(step.source, env), parse_curves(step.rhs, env)
            if len(sources) != len(targets):
                return False, 'source and target counts differ', m, None
            for s, t in zip(sources, targets):
                if apply(m, curve_class(s, cfg)) != curve_class(t, cfg):
                    return False, '%s is not sent to %s' % (s, t), m, None
            return True, '', m, None
        lhs = self.word(step.lhs, env)
        m = evaluate(lhs, cfg).matrix
        if step.kind == 'involution':
            if not mat_mul(m, m).is_identity():
                return False, 'square is not the identity', m, None
            return True, '', m, None
        rm = None
        if step.rhs:
            rm = evaluate(self.word(step.rhs, env), cfg).matrix
            if rm != m:
                return False, 'lhs and rhs images differ', m, rm
        if step.kind == 'membership':
            missing = self.ledger.unresolved(lhs)
            if missing:
                return False, 'not established: %s' % ', '.join(missing), m, rm
        return True, '', m, rm

    def run_step(self, step):
        envs = step.instances(self.cfg)
        sid = self.prefix + step.id
        verdict = Verdict(sid, step.kind, True, step.anchor, instances=len(envs), note=step.note)
        for env in envs:
            try:
                ok, detail, m, rm = self.check(step, env)
            except (ValueError, ArithmeticError, KeyError) as e:
                ok, detail, m, rm = False, '%s: %s' % (type(e).__name__, e), None, None
            if m is not None:
                verdict.lhs_digest = m.digest()
            if rm is not None:
                verdict.rhs_digest = rm.digest()
            if ok and step.kind == 'membership':
                self.ledger.establish(m, sid)
            if not ok:
                if step.forall is not None:
                    detail = '%s (%s)' % (detail, ', '.join('%s=%s' % kv for kv in env.items() if kv[0] not in self.cfg.variables()))
                verdict.passed = False
                verdict.detail = detail
                break
        if step.name is not None:
            try:
                w = self.word(step.lhs, envs[0] if envs else self.cfg.variables())
                self.names[step.name] = Word(w.factors, name=step.name)
            except (ValueError, KeyError) as e:
                logger.warning('%s: cannot bind %s at g=%i: %s' % (sid, step.name, self.cfg.g, e))
        return verdict


def replay_proof(script, cfg, ledger=None, prefix='', hypotheses=True):
    """
    Check every step of a proof script at one genus.

    Parameters
    ----------
    script : ProofScript or str
        Script or its id/alias.
    cfg : GenusConfig
    ledger : MembershipLedger, optional
        Shared ledger (lemma replays); a fresh one seeded with the script
        hypotheses otherwise.
    prefix : str
        Prepended to step ids in verdicts.
    hypotheses : bool
        Seed the ledger with the hypotheses.

    Returns
    -------
    ProofReport
    """
    if isinstance(script, str):
        script = load_script(script)
    script.check_genus(cfg)
    ledger = MembershipLedger(cfg) if ledger is None else ledger
    replay = _Replay(script, cfg, ledger, prefix)
    report = ProofReport(script.id, cfg.g, script.statement)

    if hypotheses:
        for text in script.hypotheses + script.transposition:
            ledger.establish(evaluate(replay.word(text, cfg.variables()), cfg), 'hypothesis')

    steps = [s for s in script.steps]
    for k, step in enumerate(steps):
        progress(k, len(steps), '%s g=%i' % (script.id, cfg.g))
        if not step.active(cfg):
            report.skipped.append(prefix + step.id)
            continue
        if step.kind == 'lemma':
            report.verdicts += _run_lemma(step, cfg, ledger, prefix)
        else:
            report.verdicts.append(replay.run_step(step))
        if not report.verdicts[-1].passed:
            logger.debug('%s%s failed at g=%i: %s' % (prefix, step.id, cfg.g, report.verdicts[-1].detail))

    report.verdicts.append(_check_targets(script, replay, report, prefix, hypotheses))
    logger.info('%s at genus %i: %i/%i steps passed.' % (
        script.id, cfg.g, sum(v.passed for v in report.verdicts), len(report.verdicts)))
    return report


def _run_lemma(step, cfg, ledger, prefix):
    sid = prefix + step.id
    verdict = Verdict(sid, 'lemma', True, step.anchor, note=step.note)
    try:
        sub = load_script(step.lhs)
        sub.check_genus(cfg)
        missing = []
        for text in sub.hypotheses:
            missing += ledger.unresolved(parse_word(text, cfg.variables(), sub.named_words(cfg)))
    except (ValueError, ArithmeticError) as e:
        verdict.passed, verdict.detail = False, str(e)
        return [verdict]
    if missing:
        verdict.passed, verdict.detail = False, 'hypotheses of %s not established: %s' % (sub.id, ', '.join(missing))
        return [verdict]
    sub_report = replay_proof(sub, cfg, ledger=ledger, prefix=sid + '/', hypotheses=False)
    verdict.passed = sub_report.passed
    verdict.instances = len(sub_report.verdicts)
    if not verdict.passed:
        verdict.detail = 'failed: %s' % ', '.join(v.step_id for v in sub_report.failures)
    return [verdict] + sub_report.verdicts


def target_words(script, cfg, names=None):
    """Target words of a script expanded over their ranges."""
    return expand_words(script.targets, cfg.variables(), names)


def _check_targets(script, replay, report, prefix, hypotheses=True):
    verdict = Verdict(prefix + 'targets', 'membership', True, script.statement)
    try:
        words = target_words(script, replay.cfg, replay.names)
        if not hypotheses:
            # inside a lemma the enclosing proof supplies the transposition
            supplied = {str(w) for w in expand_words(script.transposition, replay.cfg.variables())}
            words = [w for w in words if str(w) not in supplied]
    except (ValueError, KeyError) as e:
        verdict.passed, verdict.detail = False, str(e)
        return verdict
    missing = []
    for w in words:
        origin = replay.ledger.origin(evaluate(w, replay.cfg))
        if origin is None:
            missing.append(str(w))
        else:
            report.established.append((str(w), origin))
    verdict.instances = len(words)
    if missing:
        verdict.passed, verdict.detail = False, 'not established: %s' % ', '.join(missing)
    return verdict


# Perturbation
##############

_INDEX_RE = re.compile(r'\[([^\]]*)\]')


def _bump(text):
    """Add one to the first integer literal inside a bracket index."""
    for m in _INDEX_RE.finditer(text):
        lit = re.search(r'\d+', m.group(1))
        if lit is not None:
            start = m.start(1) + lit.start()
            end = m.start(1) + lit.end()
            return text[:start] + str(int(lit.group()) + 1) + text[end:]
    return None


def perturb_step(step):
    """
    Copy of the step with one index changed, or None if it has no literal
    index.
    """
    for attr in ('rhs', 'lhs', 'source'):
        bumped = _bump(getattr(step, attr))
        if bumped is not None:
            return replace(step, **{attr: bumped})
    return None


def perturbation_rate(script, cfg):
    """
    Replay the script once per mutable active step with that step perturbed.

    Returns
    -------
    detected, total : int
        Number of perturbed replays that failed, number of replays.
    """
    if isinstance(script, str):
        script = load_script(script)
    detected = total = 0
    for k, step in enumerate(script.steps):
        if step.kind == 'lemma' or not step.active(cfg):
            continue
        mutated = perturb_step(step)
        if mutated is None:
            continue
        steps = list(script.steps)
        steps[k] = mutated
        total += 1
        if not replay_proof(replace(script, steps=steps), cfg).passed:
            detected += 1
        else:
            logger.warning('perturbing %s of %s went unnoticed' % (step.id, script.id))
    return detected, total
