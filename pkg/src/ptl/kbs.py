"""Small knowledge bases used in the examples, the tests and the CLI demos.

Atoms: ``b`` bird, ``f`` flies, ``p`` penguin, ``r`` robin, ``q`` a second
generic atom.
"""

# penguins are birds; typical birds fly
BIRDS = ("p -> b", "*b -> f")

# typical things are neither penguins nor robins; typical penguins are typical
# non-flyers; typical robins are typical flyers; penguins are not robins
PENGUINS_ROBINS = ("*T -> !p & !r", "*p -> *!f", "*r -> *f", "p -> !r")

# as above, but typical penguins merely do not fly
PENGUINS_ROBINS_WEAK = ("*T -> !p & !r", "*p -> !f", "*r -> *f", "p -> !r")

# typically p holds; the typical non-p situations are typical q situations
IMPOSSIBILITY = ("*T -> p", "*!p -> *q")

# the classic conditional KB: birds fly, penguins are birds, penguins do not fly
PENGUINS_CONDITIONAL = ("*b -> f", "*p -> b", "*p -> !f")

# a conditional KB over two atoms
TWO_ATOM_CONDITIONAL = ("*T -> p", "*!p -> q")

ALL = {
    "birds": BIRDS,
    "penguins_robins": PENGUINS_ROBINS,
    "penguins_robins_weak": PENGUINS_ROBINS_WEAK,
    "impossibility": IMPOSSIBILITY,
    "penguins_conditional": PENGUINS_CONDITIONAL,
    "two_atom_conditional": TWO_ATOM_CONDITIONAL,
}
