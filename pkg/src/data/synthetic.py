"""
Synthetic MTS generators with known structure: grouped VAR(1) items, an
EEG-shaped two-class surrogate and an hourly activity series.
"""
import numpy as np
from scipy.stats import ortho_group

from src.data.dataset import MtsDataset, MtsItem

ACTIVITY_VARIABLES = ("steps", "calories", "hr_avg", "hr_peak", "hr_low")


def _var1(rng, m, mixing, phi, burn_in=32):
    n = mixing.shape[0]
    noise = rng.standard_normal((m + burn_in, n)) @ mixing.T
    out = np.zeros((m + burn_in, n))
    for t in range(1, m + burn_in):
        out[t] = phi * out[t - 1] + noise[t]
    return out[burn_in:]


def var1_groups(n_groups=3, per_group=20, m=64, n=4, phi=0.5, seed=0):
    """
    `n_groups` groups of VAR(1) items. All groups share one orthogonal basis
    and one innovation spectrum, but each group rolls the spectrum so a
    different basis vector carries the largest variance.
    """
    rng = np.random.default_rng(seed)
    basis = ortho_group.rvs(n, random_state=rng)
    spectrum = np.geomspace(8.0, 1.0, n)
    items = []
    for group in range(n_groups):
        scales = np.sqrt(np.roll(spectrum, group))
        mixing = basis * scales
        for index in range(per_group):
            values = _var1(rng, m, mixing, phi) + rng.normal(0.0, 0.5, n)
            items.append(MtsItem(id=f"g{group}_{index}", values=values, label=f"g{group}"))
    names = tuple(f"x{col}" for col in range(n))
    return MtsDataset(items=tuple(items), variable_names=names)


def eeg_surrogate(k=60, m=256, n=64, phi=0.7, seed=0):
    """Two-class 'control' / 'alcoholic' trials with class-specific spatial mixing."""
    rng = np.random.default_rng(seed)
    spectrum = np.sqrt(np.geomspace(10.0, 0.5, n))
    class_bases = {
        label: ortho_group.rvs(n, random_state=rng) for label in ("control", "alcoholic")
    }
    items = []
    for index in range(k):
        label = "control" if index % 2 == 0 else "alcoholic"
        jitter = np.linalg.qr(class_bases[label] + 0.15 * rng.standard_normal((n, n)))[0]
        values = _var1(rng, m, jitter * spectrum, phi)
        items.append(MtsItem(id=f"trial{index:03d}", values=values, label=label))
    names = tuple(f"e{col:02d}" for col in range(n))
    return MtsDataset(items=tuple(items), variable_names=names)


def activity_series(days=51, seed=0, subject="subject"):
    """
    One hourly (days*24) x 5 series of steps, calories, average/peak/lowest
    heart rate. Days cycle through active, inactive and noisy regimes; the
    returned list gives each day's regime.
    """
    rng = np.random.default_rng(seed)
    hours = np.arange(24)
    daytime = np.clip(np.sin((hours - 6) / 16 * np.pi), 0.0, None)
    regimes = rng.choice(["active", "inactive", "noisy"], size=days, p=[0.45, 0.4, 0.15])
    rows = []
    for regime in regimes:
        level = {"active": 120.0, "inactive": 20.0, "noisy": 60.0}[regime]
        steps = np.maximum(0.0, level * daytime * rng.lognormal(0.0, 0.3, 24))
        calories = 60.0 + 0.05 * steps + rng.normal(0.0, 2.0, 24)
        hr_avg = 62.0 + 0.08 * steps + rng.normal(0.0, 2.0, 24)
        hr_peak = hr_avg + 10.0 + 0.05 * steps + np.abs(rng.normal(0.0, 3.0, 24))
        hr_low = hr_avg - 8.0 - np.abs(rng.normal(0.0, 2.0, 24))
        day = np.column_stack([steps, calories, hr_avg, hr_peak, hr_low])
        if regime == "noisy":
            spikes = rng.random((24, 5)) < 0.2
            day = np.where(spikes, day * rng.uniform(0.0, 4.0, (24, 5)), day)
        rows.append(day)
    item = MtsItem(id=subject, values=np.vstack(rows))
    return MtsDataset(items=(item,), variable_names=ACTIVITY_VARIABLES), list(regimes)
