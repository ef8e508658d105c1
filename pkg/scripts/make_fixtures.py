"""Regenerate the bundled network fixtures in src/avatartime/data/."""

from pathlib import Path

from avatartime.egonet import Alter, EgoNetwork, build_size_matched_network

DATA = Path(__file__).resolve().parents[1] / "src" / "avatartime" / "data"

# two alters, 1/beta = 0.78
FIG3 = EgoNetwork((
    Alter(1, "support_clique", 40.0, 1 / 0.78),
    Alter(2, "sympathy_group", 15.0, 1 / 0.78),
))


def fig4() -> EgoNetwork:
    return build_size_matched_network(size=117, total=1288.0, start_seed=0)


if __name__ == "__main__":
    FIG3.save(DATA / "fig3.json")
    net = fig4()
    net.save(DATA / "fig4.json")
    print(f"fig4: seed={net.seed} |V|={len(net)} X~={net.total_x_tilde!r}")
