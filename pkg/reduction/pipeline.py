"""
pipeline.py

End-to-end decision chains: a source instance is reduced stage by stage down
to a gadget network, the gadget is decided by an exact solver, and the
witness is carried back through every stage.

    partition        -> exact_partition -> complete CMS-0 network
    exact_partition  -> complete CMS-0 network
    sp               -> ppf -> sppf -> multiplicative star network
    ppf              -> sppf -> multiplicative star network
    sppf             -> multiplicative star network
"""

from __future__ import annotations

from dataclasses import dataclass, field

from basics.config import RunConfig
from basics.logger import get_logger
from .gadgets import backmap, decide, make_certificate
from .problems import Decision, Problem, check_witness

log = get_logger("pipeline")

CHAINS = {
    Problem.PARTITION: ("partition-to-exact", "exact-to-cms0"),
    Problem.EXACT_PARTITION: ("exact-to-cms0",),
    Problem.SP: ("sp-to-ppf", "ppf-to-sppf", "sppf-to-oms"),
    Problem.PPF: ("ppf-to-sppf", "sppf-to-oms"),
    Problem.SPPF: ("sppf-to-oms",),
}


@dataclass(frozen=True)
class PipelineResult:
    """
    Attributes:
        decision (Decision): Answer for the source instance, witness in source indices.
        stages (tuple[ReductionCertificate]): The certificates, source first.
    """
    decision: Decision
    stages: tuple = field(default_factory=tuple)

    @property
    def answer(self):
        return self.decision.answer

    @property
    def witness(self):
        return self.decision.witness

    def to_dict(self):
        payload = self.decision.to_dict(self.stages[0].source if self.stages else None)
        payload["stages"] = [cert.kind for cert in self.stages]
        return payload


def run_pipeline(instance, config=None):
    """
    Decides `instance` through its gadget chain.

    Returns:
        PipelineResult: The decision on the source instance and every certificate built.
    """
    config = config or RunConfig()
    stages, current = [], instance
    for kind in CHAINS[instance.problem]:
        cert = make_certificate(kind, current, config)
        stages.append(cert)
        if cert.target is None:
            break
        current = cert.target

    last = decide(stages[-1], config)
    witness = last.witness
    if last.answer and witness is not None:
        for cert in reversed(stages[:-1]):
            witness = backmap(cert, witness)
        if not check_witness(instance, witness):
            log.error(f"back-mapped witness {witness} does not solve the source instance")
            return PipelineResult(Decision(True, None, "back-mapped witness rejected", last.details), tuple(stages))
    decision = Decision(last.answer, witness if last.answer else None, last.reason, last.details)
    log.info(f"{instance.problem.value} via {' -> '.join(c.kind for c in stages)}: "
             f"{'YES' if decision.answer else 'NO'}")
    return PipelineResult(decision, tuple(stages))
