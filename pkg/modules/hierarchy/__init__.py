from modules.hierarchy.hubs import (
    HubHierarchy,
    build_hub_hierarchy,
    hierarchy_nets,
    hierarchy_sparsity_report,
    hierarchy_towns,
    level_index,
    packing_violation,
    verify_hierarchy,
)
from modules.hierarchy.walks import (
    HubNetCheck,
    Walk,
    is_hub_net_respecting,
    make_hub_net_respecting,
    make_net_respecting,
    net_violations,
)
