import json
import logging
from pathlib import Path

from models.config import RunConfig
from models.documents import DOCUMENT_MODELS
from models.reports import Report
from modules.errors import ParameterError
from modules.graph_core import write_edge_list
from modules.synthetic import generate_instance
from services.graph_service import new_report
from database.documents import write_terminals

logger = logging.getLogger(__name__)

SCHEMA_DIR = Path("docs") / "schemas"


class InstanceService:
    def cmd_generate(self, config: RunConfig) -> Report:
        """Write a synthetic graph as an edge list, plus its terminals when it has any."""
        if not config.kind:
            raise ParameterError("generate needs --kind")
        if not config.save_path:
            raise ParameterError("generate needs an output file (--out)")
        instance = generate_instance(config.kind, config.params, config.seed)
        write_edge_list(instance.graph, config.save_path)

        report = new_report(config)
        report.metrics.update(
            {
                "kind": instance.kind,
                "params": instance.params,
                "vertices": instance.graph.vertex_count,
                "edges": instance.graph.edge_count,
                "terminals": int(len(instance.terminals)),
                "graph_path": config.save_path,
            }
        )
        if len(instance.terminals):
            terminals_path = config.terminals_path or f"{config.save_path}.terminals"
            write_terminals(instance.terminals, terminals_path)
            report.metrics["terminals_path"] = terminals_path
        return report

    def cmd_schemas(self, config: RunConfig) -> Report:
        """JSON schema of every document model, the report and the run configuration."""
        target = Path(config.save_path) if config.save_path else SCHEMA_DIR
        target.mkdir(parents=True, exist_ok=True)
        models = {**DOCUMENT_MODELS, "report": Report, "run-config": RunConfig}
        written = []
        for name, model in models.items():
            path = target / f"{name}.schema.json"
            path.write_text(json.dumps(model.model_json_schema(by_alias=True), indent=2) + "\n")
            written.append(str(path))
        logger.info("wrote %d schemas to %s", len(written), target)

        report = new_report(config)
        report.metrics["schemas"] = written
        return report
