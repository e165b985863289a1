from modules.synthetic.instances import (
    INSTANCE_KINDS,
    GeneratedInstance,
    generate_instance,
    get_kind_definition,
    list_kind_keys,
)

__all__ = ["INSTANCE_KINDS", "GeneratedInstance", "generate_instance", "get_kind_definition", "list_kind_keys"]
