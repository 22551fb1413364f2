"""Optional figures written next to the CSV output (needs matplotlib)."""

from __future__ import annotations


def _pyplot():
    try:
        import matplotlib
    except ImportError as exc:
        raise RuntimeError("plotting needs matplotlib: pip install 'artifact[plot]'") from exc
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def plot_sweep(rows: list[dict], path: str) -> str:
    """sigma_xx against the Abelian phase, one curve per enclosed charge."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for label in dict.fromkeys(r["inner_label"] for r in rows):
        pts = [(r["alpha"], r["sigma_xx"]) for r in rows if r["inner_label"] == label]
        ax.plot([p[0] for p in pts], [p[1] for p in pts], label=f"inner = {label}")
    ax.set_xlabel(r"$\alpha$ (rad)")
    ax.set_ylabel(r"$\sigma_{xx}$ (arb.)")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_trace(trace: list, path: str) -> str:
    """Best distance so far against the number of words evaluated."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 3.5))
    xs = [t[0] for t in trace]
    ys = [max(t[1], 1e-16) for t in trace]
    ax.step(xs, ys, where="post")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("words evaluated")
    ax.set_ylabel("best distance")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
