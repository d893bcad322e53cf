"""Marked groups: a model with an ordered generating tuple."""

from .models import ModelError
from .words import Word, parse_word


class GenerationError(ValueError):
    pass


class MarkedGroup:
    """A group model with an ordered marking.

    The marking is given as words over the model's built-in generators or
    directly as elements.  Generation is checked on construction unless
    ``check=False``; ``certificate`` may map built-in generator indices to words
    in the marking that evaluate to them.
    """

    def __init__(self, model, words=None, elements=None, check=True, certificate=None,
                 search_radius=6, search_cap=50_000):
        self.model = model
        if words is None and elements is None:
            words = [Word.gen(i + 1, model.ngens()) for i in range(model.ngens())]
        self.words = list(words) if words is not None else None
        if elements is None:
            elements = [model.eval_word(w) for w in self.words]
        self.elements = list(elements)
        if not self.elements:
            raise GenerationError("empty marking")
        self.certificate = certificate
        self.generation_method = None
        if check:
            self.generation_method = self._check_generation(search_radius, search_cap)

    @classmethod
    def standard(cls, model):
        return cls(model, check=False)

    @classmethod
    def from_text(cls, model, gens_text, **kw):
        """Marking from comma-separated words over the model's generator names."""
        names = model.gen_names()
        words = [parse_word(t.strip(), model.ngens(), names) for t in _split_top(gens_text)]
        return cls(model, words=words, **kw)

    @property
    def arity(self):
        return len(self.elements)

    def label_names(self):
        if self.words is not None:
            return [w.to_text(self.model.gen_names()) for w in self.words]
        return [f"s{i + 1}" for i in range(self.arity)]

    def evaluate(self, w):
        if w.arity > self.arity and any(abs(x) > self.arity for x in w.letters):
            raise ModelError(f"word of arity {w.arity} on a marking of size {self.arity}")
        return self.model.eval_word(w, self.elements)

    def is_standard(self):
        return self.elements == self.model.gens()

    # ---------------------------------------------------------- generation

    def _check_generation(self, radius, cap):
        m = self.model
        gens = m.gens()
        present = set(self.elements)
        if all(g in present or m.is_identity(g) for g in gens):
            return "contains-generators"
        verdict = m.generation_test(self.elements, self.words)
        if verdict is True:
            return "model-test"
        if verdict is False:
            raise GenerationError(f"marking does not generate {m.descriptor()}")
        if self.certificate is not None:
            for i, w in self.certificate.items():
                if self.evaluate(w) != gens[i]:
                    raise GenerationError(f"certificate word for generator {i + 1} is wrong")
            missing = [i for i, g in enumerate(gens)
                       if i not in self.certificate and g not in present and not m.is_identity(g)]
            if not missing:
                return "certificate"
        if self._search_generators(radius, cap):
            return "ball-search"
        raise GenerationError(
            f"could not confirm that the marking generates {m.descriptor()} "
            f"(search radius {radius}, cap {cap})")

    def _search_generators(self, radius, cap):
        m = self.model
        wanted = {g for g in m.gens() if not m.is_identity(g)}
        labels = self.elements + [m.inv(e) for e in self.elements]
        seen = {m.identity()}
        frontier = [m.identity()]
        wanted -= seen
        for _ in range(radius):
            nxt = []
            for g in frontier:
                for s in labels:
                    h = m.mul(g, s)
                    if h not in seen:
                        seen.add(h)
                        nxt.append(h)
                        wanted.discard(h)
                        if not wanted:
                            return True
                        if len(seen) > cap:
                            return False
            frontier = nxt
        return not wanted

    def __repr__(self):
        return f"MarkedGroup({self.model.descriptor()}, [{', '.join(self.label_names())}])"


def _split_top(text):
    """Split on commas outside brackets, so "[x,y],x" gives two words."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [s for s in out if s.strip()]


def evaluate(mg, w):
    return mg.evaluate(w)


def marked(model, gens=None, **kw):
    """Convenience: a MarkedGroup from a model and an optional comma-separated marking."""
    if gens is None:
        return MarkedGroup(model, check=False)
    return MarkedGroup.from_text(model, gens, **kw)
