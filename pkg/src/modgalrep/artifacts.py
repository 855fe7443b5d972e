"""Pipeline orchestration and text artifact caching.

Stages run in order qexp -> periods -> torsion -> poly -> resolvents;
each writes one line-based text artifact keyed by a content hash of the
run configuration, so a rerun with the same configuration is a cache
hit.  Big floats are serialised with gmpy2.to_binary (hex-encoded) so
that artifacts round-trip byte-identically.

Error escalation: a stage failing with a precision-type error is
replayed with doubled precision (twice); a degenerate evaluation
configuration advances to the next config and retries.
"""

import hashlib
import json
import os
import time
from fractions import Fraction

import gmpy2
from gmpy2 import mpc

from . import frobenius as fb
from . import qexpansion, targets
from .eisenstein import LevelData
from .evaluation import DegenerateConfigError, Evaluator, build_F
from .jacobian import Ambient, Subspace
from .modsym import HeckeEigendata, ModSymSpace
from .numeric import (BadPrimeError, ConfigExcludedError, PrecisionError,
                      RecognitionError, mag, workprec)
from .periods import PeriodLattice
from .torsion import TorsionContext

MAGIC = "modgalrep-artifact v1"
STAGES = ("qexp", "periods", "torsion", "poly", "resolvents")

DEFAULT_PREC = {11: 800, 13: 900, 17: 1400, 19: 2400}


def _is_prime_small(n):
    return n >= 2 and gmpy2.is_prime(n)


class RunConfig:
    def __init__(self, form="delta", ell=11, prec=None, B=4096,
                 cache=None, eval_config=1, seed=20170):
        if form not in targets.WEIGHTS:
            raise ConfigExcludedError("unknown form %r" % form)
        if ell < 11 or not _is_prime_small(ell):
            raise ConfigExcludedError("level must be a prime >= 11")
        if ell in targets.EXCEPTIONAL[form]:
            raise ConfigExcludedError(
                "ell=%d is exceptional for %s; the representation there "
                "is reducible or dihedral and this method does not apply"
                % (ell, form))
        self.form = form
        self.ell = ell
        self.prec = prec if prec is not None else DEFAULT_PREC.get(
            ell, 300 * ell)
        self.B = B
        self.cache = cache or os.path.join(
            os.environ.get("XDG_CACHE_HOME",
                           os.path.expanduser("~/.cache")), "modgalrep")
        self.eval_config = eval_config
        self.seed = seed

    def fields_for(self, stage):
        base = {"form": self.form, "ell": self.ell, "seed": self.seed}
        if stage == "qexp":
            base["B"] = self.B
        else:
            base["prec"] = self.prec
        if stage in ("poly", "resolvents"):
            base["eval_config"] = self.eval_config
        return base

    def key(self, stage):
        blob = json.dumps(self.fields_for(stage), sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _mpc_hex(z):
    # serialise the components directly: converting through mpc() would
    # round to the ambient context precision
    if isinstance(z, mpc):
        re, im = z.real, z.imag
    else:
        re, im = z, gmpy2.mpfr(0)
    return gmpy2.to_binary(re).hex() + ":" + gmpy2.to_binary(im).hex()


def _mpc_unhex(s):
    a, b = s.split(":")
    re = gmpy2.from_binary(bytes.fromhex(a))
    im = gmpy2.from_binary(bytes.fromhex(b))
    # the mpc constructor rounds to the ambient context precision, so
    # the stored precision must be passed through explicitly
    return mpc(re, im, precision=(re.precision, im.precision))


class Pipeline:
    """Builds stage artifacts on demand and answers a_p queries."""

    def __init__(self, config, log=None):
        self.cfg = config
        self.log = log or (lambda msg: None)
        os.makedirs(config.cache, exist_ok=True)
        self._live = {}

    # -- artifact plumbing ------------------------------------------------------

    def path_for(self, stage):
        cfg = self.cfg
        name = "%s-%s-%d-%s.txt" % (stage, cfg.form, cfg.ell,
                                    cfg.key(stage))
        return os.path.join(cfg.cache, name)

    def _write(self, stage, lines):
        head = [MAGIC, "stage %s" % stage]
        for k, v in sorted(self.cfg.fields_for(stage).items()):
            head.append("%s %s" % (k, v))
        body = "\n".join(head + list(lines)) + "\n"
        path = self.path_for(stage)
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            fh.write(body)
        os.replace(tmp, path)
        return path

    def _read(self, stage):
        with open(self.path_for(stage)) as fh:
            lines = fh.read().splitlines()
        if lines[0] != MAGIC or lines[1] != "stage %s" % stage:
            raise ValueError("artifact header mismatch for %s" % stage)
        n_head = 2 + len(self.cfg.fields_for(stage))
        return lines[n_head:]

    def ensure(self, stage):
        """Make the artifact for stage (and its ancestors) exist."""
        order = STAGES[:STAGES.index(stage) + 1]
        for st in order:
            if os.path.exists(self.path_for(st)):
                continue
            self._run_with_escalation(st)
        return self.path_for(stage)

    def _run_with_escalation(self, stage):
        runner = getattr(self, "_run_" + stage)
        for attempt in range(3):
            try:
                t0 = time.time()
                runner()
                self.log("stage %s done in %.1fs" % (stage,
                                                     time.time() - t0))
                return
            except DegenerateConfigError as exc:
                self.log("stage %s: degenerate config (%s), advancing"
                         % (stage, exc))
                self.cfg.eval_config += 1
                self._live.pop("alphas", None)
                if self.cfg.eval_config > 8:
                    raise
            except (PrecisionError, RecognitionError) as exc:
                if attempt == 2:
                    raise
                self.log("stage %s: %s; doubling precision %d -> %d"
                         % (stage, exc, self.cfg.prec, 2 * self.cfg.prec))
                self.cfg.prec *= 2
                self._live.clear()

    # -- live objects (deterministic, rebuilt as needed) -------------------------

    def _get(self, name, builder):
        if name not in self._live:
            self._live[name] = builder()
        return self._live[name]

    @property
    def space(self):
        return self._get("space", lambda: ModSymSpace(self.cfg.ell))

    @property
    def eig(self):
        return self._get("eig", lambda: HeckeEigendata(self.space))

    @property
    def level(self):
        return self._get("level",
                         lambda: LevelData(self.eig, self.cfg.prec))

    @property
    def lattice(self):
        return self._get("lattice", lambda: PeriodLattice(
            self.eig, self.level, self.cfg.prec))

    @property
    def ambient(self):
        return self._get("ambient", lambda: Ambient(
            self.level, self.cfg.prec, seed=self.cfg.seed))

    @property
    def torsion_ctx(self):
        return self._get("torsion_ctx", lambda: TorsionContext(
            self.ambient, self.lattice, seed=self.cfg.seed + 1))

    # -- the stages ---------------------------------------------------------------

    def _run_qexp(self):
        p, orbits = qexpansion.expand_level(self.eig, self.cfg.B)
        lines = ["prime %d" % p, "orbits %d" % len(orbits)]
        for ox in orbits:
            lines.append("orbit eps_order %d roots %d"
                         % (ox.orbit["eps_order"], len(ox.roots)))
            lines.append("roots " + " ".join(str(r) for r in ox.roots))
            for ser in ox.series:
                lines.append("series " + " ".join(str(c) for c in ser))
        self._write("qexp", lines)

    def _run_periods(self):
        lat = self.lattice
        res = max(lat.equivariance_residual(q) for q in (2, 3, 7)
                  if q != self.cfg.ell)
        if res > gmpy2.mpfr(2) ** (-(self.cfg.prec // 2)):
            raise PrecisionError("equivariance residual %s too large"
                                 % res)
        lines = ["winding_primes " + " ".join(map(str,
                                                  lat.winding_primes)),
                 "residual " + _mpc_hex(res),
                 "rows %d cols %d" % (len(lat.matrix),
                                      len(lat.matrix[0]))]
        for row in lat.matrix:
            lines.append("row " + " ".join(_mpc_hex(z) for z in row))
        self._write("periods", lines)

    def _run_torsion(self):
        self.ensure("periods")
        tc = self.torsion_ctx
        x1, plane, mu, epst = tc.torsion_subspace(self.cfg.form, which=0)
        x2, _, _, _ = tc.torsion_subspace(self.cfg.form, which=1)
        lines = ["plane " + json.dumps([[int(t) for t in row]
                                        for row in plane]),
                 "mu " + json.dumps({str(k): v for k, v in mu.items()}),
                 "epst " + json.dumps({str(k): v
                                       for k, v in epst.items()})]
        for name, W in (("x1", x1), ("x2", x2)):
            lines.append("subspace %s rows %d" % (name, len(W.coeffs)))
            for row in W.coeffs:
                lines.append("c " + " ".join(_mpc_hex(z) for z in row))
        self._write("torsion", lines)
        self._live["torsion_pair"] = (x1, x2)

    def _load_torsion_pair(self):
        if "torsion_pair" in self._live:
            return self._live["torsion_pair"]
        lines = self._read("torsion")
        amb = self.ambient
        out = []
        i = 0
        while i < len(lines):
            if lines[i].startswith("subspace"):
                nrows = int(lines[i].split()[-1])
                rows = []
                for j in range(nrows):
                    rows.append([_mpc_unhex(s)
                                 for s in lines[i + 1 + j].split()[1:]])
                out.append(amb.subspace(rows))
                i += 1 + nrows
            else:
                i += 1
        self._live["torsion_pair"] = tuple(out)
        return tuple(out)

    def _run_poly(self):
        self.ensure("torsion")
        cfg = self.cfg
        x1, x2 = self._load_torsion_pair()
        with workprec(cfg.prec + 64):
            ev = Evaluator(self.ambient, cfg.prec, config=cfg.eval_config)
            classes = ev.plane_classes(x1, x2)
            alphas = ev.all_alphas(classes)
            self._check_separation(alphas)
            F, keys = build_F(alphas, cfg.prec)
        if len(F) - 1 != cfg.ell ** 2 - 1:
            raise PrecisionError("F has degree %d" % (len(F) - 1))
        den = 1
        for c in F:
            den = den * c.denominator // gmpy2.gcd(den, c.denominator)
        lines = ["degree %d" % (len(F) - 1),
                 "eval_config_used %d" % cfg.eval_config,
                 "denominator %d" % den]
        for c in F:
            lines.append("coeff %d" % int(c * den))
        for k in keys:
            lines.append("label %d %d %s" % (k[0], k[1],
                                             _mpc_hex(alphas[k])))
        self._write("poly", lines)

    def _check_separation(self, alphas):
        vals = list(alphas.values())
        floor = gmpy2.mpfr(2) ** (-(self.cfg.prec // 4))
        worst = None
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                d = mag(vals[i] - vals[j])
                if worst is None or d < worst:
                    worst = d
        if worst is None or worst < floor:
            raise DegenerateConfigError(
                "alpha values do not separate the classes (min gap %s)"
                % worst)

    def read_poly(self):
        """(F, labelled alphas) from the poly artifact."""
        lines = self._read("poly")
        den = None
        coeffs = []
        alphas = {}
        for ln in lines:
            parts = ln.split()
            if parts[0] == "denominator":
                den = int(parts[1])
            elif parts[0] == "coeff":
                coeffs.append(Fraction(int(parts[1]), den))
            elif parts[0] == "label":
                alphas[(int(parts[1]), int(parts[2]))] = \
                    _mpc_unhex(parts[3])
        return coeffs, alphas

    def _run_resolvents(self):
        self.ensure("poly")
        cfg = self.cfg
        F, alphas = self.read_poly()
        den = 1
        for c in F:
            den = den * c.denominator // gmpy2.gcd(den, c.denominator)
        Fint = [int(c * den) for c in F]
        prec = max(cfg.prec, 400)
        keys = sorted(alphas)
        if den == 1:
            refined = fb.refine_roots(Fint, [alphas[k] for k in keys],
                                      prec)
        else:
            refined = [z * den for z in fb.refine_roots(
                Fint, [alphas[k] * den for k in keys], prec)]
            refined = [z / den for z in refined]
        amap = {k: z for k, z in zip(keys, refined)}
        ft, labels, betas = fb.quotient_poly(amap, cfg.ell, prec)
        eng = fb.FrobeniusEngine(cfg.form, cfg.ell, ft, labels, betas,
                                 prec)
        lines = ["orientation %d" % eng.orientation,
                 "denominator %d" % eng.d,
                 "gpoly " + " ".join(str(c) for c in eng.G)]
        for h in eng.H_CHOICES:
            lines.append("hpoly " + " ".join(str(c) for c in h))
            for key, poly in sorted(eng.resolvents[h].items()):
                rep = eng.classes[key][0]
                lines.append("class %d %d %d rep %d %d %d %d size %d"
                             % (key[0], key[1], int(key[2]),
                                rep[0], rep[1], rep[2], rep[3],
                                len(eng.classes[key])))
                lines.append("gamma " + " ".join(str(c) for c in poly))
        self._write("resolvents", lines)
        self._live["engine"] = eng

    def engine(self):
        if "engine" in self._live:
            return self._live["engine"]
        self.ensure("resolvents")
        lines = self._read("resolvents")
        orientation = d = G = None
        res = {}
        cur_h = None
        cur_key = None
        for ln in lines:
            parts = ln.split()
            if parts[0] == "orientation":
                orientation = int(parts[1])
            elif parts[0] == "denominator":
                d = int(parts[1])
            elif parts[0] == "gpoly":
                G = [int(c) for c in parts[1:]]
            elif parts[0] == "hpoly":
                cur_h = tuple(int(c) for c in parts[1:])
                res[cur_h] = {}
            elif parts[0] == "class":
                cur_key = (int(parts[1]), int(parts[2]),
                           bool(int(parts[3])))
            elif parts[0] == "gamma":
                res[cur_h][cur_key] = [int(c) for c in parts[1:]]
        eng = fb.FrobeniusEngine.from_artifact(
            self.cfg.form, self.cfg.ell, G, d, orientation, res)
        self._live["engine"] = eng
        return eng

    # -- queries --------------------------------------------------------------------

    def ap(self, p):
        """(class key, a_p mod ell) for a prime p."""
        if not gmpy2.is_prime(p):
            raise BadPrimeError("p is not prime")
        eng = self.engine()
        key = eng.frobenius_class(p)
        return key, eng.ap_from_class(key, p)


def ap_crt(form, ells, p, cache=None, log=None):
    """CRT-combined congruence for a_p across several levels.

    Returns (residue, modulus) with a_p = residue mod modulus.
    """
    r, m = 0, 1
    for ell in ells:
        pipe = Pipeline(RunConfig(form=form, ell=ell, cache=cache),
                        log=log)
        _, ap = pipe.ap(p)
        # combine r mod m with ap mod ell
        t = ((ap - r) * pow(m % ell, ell - 2, ell)) % ell
        r = r + m * t
        m *= ell
    return r % m, m
