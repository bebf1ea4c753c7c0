"""Random fiber-sum recipes shared by the dissolution tests."""

import random

from fourgeo.symplectic import E, K3_blownup, S, SumRecipe, Y


def random_recipe(rng: random.Random) -> SumRecipe:
    """Simply connected, certainly non-spin chain starting with E(n), n >= 2."""
    while True:
        runs = [(E(rng.randint(2, 6)), rng.randint(1, 3), 1)]
        for _ in range(rng.randint(0, 4)):
            kind = rng.choice("SEYK")
            if kind == "S":
                seam = 2 if runs[-1][0] == S and rng.random() < 0.5 else 1
                runs.append((S, rng.randint(1, 4), seam))
            elif kind == "E":
                runs.append((E(rng.randint(1, 6)), rng.randint(1, 3), 1))
            elif kind == "Y":
                runs.append((Y(rng.randint(1, 3)), rng.randint(1, 2), 1))
            else:
                runs.append((K3_blownup(rng.randint(0, 3)), 1, 1))
        recipe = SumRecipe.build(runs, blowups=rng.choice([0, 0, 1, 3, 7]))
        if not recipe.possibly_spin:
            return recipe
