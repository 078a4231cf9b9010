import random

from movingheights import HomForm, enumerate_Td, only_trivial_zero


def form(n, d, coeffs):
    """Shorthand HomForm constructor for tests."""
    return HomForm.make(n, d, coeffs)


def e(*exps):
    return tuple(exps)


def random_form(rng: random.Random, n: int, d: int, height: int = 9) -> HomForm:
    while True:
        coeffs = {exps: rng.randint(-height, height) for exps in enumerate_Td(n, d)}
        if any(c != 0 for c in coeffs.values()):
            return HomForm.make(n, d, coeffs)


def random_general_position(rng: random.Random, n: int, d: int, height: int = 5):
    """n forms of degree d that sit inside an (n+1)-form family passing
    only_trivial_zero; retries until the emptiness test certifies them."""
    while True:
        forms = [random_form(rng, n, d, height) for _ in range(n + 1)]
        if only_trivial_zero(forms):
            return forms[:n]
