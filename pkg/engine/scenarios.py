"""
Instance families for sweeps and benchmarks
Named parameter ranges for random simple arenas, loaded from JSON presets
"""
import json
import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from .arena import MAX_SEED, Arena, generate_simple
from .errors import InfeasibleParametersError
from .settings import DEFAULT_EXACT_SIMPLICITY_LIMIT

logger = logging.getLogger(__name__)

FAMILIES_PATH = Path(__file__).resolve().parent.parent / "data" / "templates" / "families.json"

SIMPLICITY_METHODS = ("lift", "reject", "none")


@dataclass
class InstanceFamily:
    """Ranges for n, m/n and W, plus how simplicity is obtained"""
    name: str
    n_min: int
    n_max: int
    m_factor_min: int = 1  # m drawn from [m_factor_min * n, m_factor_max * n]
    m_factor_max: int = 3
    w_min: int = 1
    w_max: int = 4
    simplicity: str = "lift"
    description: str = ""

    def validate(self) -> "InstanceFamily":
        if self.n_min < 1 or self.n_max < self.n_min:
            raise InfeasibleParametersError(f"family {self.name}: need 1 <= n_min <= n_max")
        if self.m_factor_min < 1 or self.m_factor_max < self.m_factor_min:
            raise InfeasibleParametersError(f"family {self.name}: need 1 <= m_factor_min <= m_factor_max")
        if self.w_min < 1 or self.w_max < self.w_min:
            raise InfeasibleParametersError(f"family {self.name}: need 1 <= w_min <= w_max")
        if self.simplicity not in SIMPLICITY_METHODS:
            raise InfeasibleParametersError(f"family {self.name}: unknown simplicity {self.simplicity!r}")
        return self

    def draw(self, seed: int, index: int) -> "InstanceSpec":
        """
        Parameters of instance `index` of a sweep started at `seed`

        Everything is drawn from RandomState(seed + index), so an instance
        depends only on its own index.
        """
        random_state = np.random.RandomState((seed + index) % MAX_SEED)
        n = int(random_state.randint(self.n_min, self.n_max + 1))
        m = int(random_state.randint(self.m_factor_min * n, self.m_factor_max * n + 1))
        W = int(random_state.randint(self.w_min, self.w_max + 1))
        instance_seed = int(random_state.randint(0, MAX_SEED, dtype=np.int64))
        return InstanceSpec(self.name, index, instance_seed, n, m, W, self.simplicity)

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, name: str, data: Dict) -> "InstanceFamily":
        return cls(
            name=name,
            n_min=data["n_min"],
            n_max=data["n_max"],
            m_factor_min=data.get("m_factor_min", 1),
            m_factor_max=data.get("m_factor_max", 3),
            w_min=data.get("w_min", 1),
            w_max=data.get("w_max", 4),
            simplicity=data.get("simplicity", "lift"),
            description=data.get("description", ""),
        ).validate()


@dataclass(frozen=True)
class InstanceSpec:
    """One concrete instance; `gen --n --m --w --seed --simple` rebuilds it"""
    family: str
    index: int
    seed: int
    n: int
    m: int
    W: int
    simplicity: str = "lift"

    def generate(self, exact_limit: int = DEFAULT_EXACT_SIMPLICITY_LIMIT) -> Arena:
        return generate_simple(
            self.n, self.m, self.W, self.seed, method=self.simplicity, exact_limit=exact_limit
        )


def load_families(path: Optional[Union[str, Path]] = None) -> Dict[str, InstanceFamily]:
    """Read every family preset from the JSON file (bundled presets by default)"""
    path = Path(path) if path is not None else FAMILIES_PATH
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    families = {name: InstanceFamily.from_dict(name, entry) for name, entry in data.items()}
    logger.debug("loaded %d instance families from %s", len(families), path)
    return families


def get_family(name: str, path: Optional[Union[str, Path]] = None) -> InstanceFamily:
    families = load_families(path)
    if name not in families:
        raise InfeasibleParametersError(
            f"unknown instance family {name!r}; known: {', '.join(sorted(families))}"
        )
    return families[name]


def get_doubling_series(
    start: int = 1250,
    steps: int = 4,
    m_factor: int = 5,
    W: int = 1000,
) -> List[InstanceFamily]:
    """Fixed-size families doubling n each step, for heap-operation growth checks"""
    return [
        InstanceFamily(
            name=f"doubling-{start * 2 ** k}",
            n_min=start * 2 ** k,
            n_max=start * 2 ** k,
            m_factor_min=m_factor,
            m_factor_max=m_factor,
            w_min=W,
            w_max=W,
            description=f"n = {start * 2 ** k}, m = {m_factor}n, W = {W}",
        )
        for k in range(steps)
    ]
