#ifndef BPMNCHECK_BENCHGEN_HPP
#define BPMNCHECK_BENCHGEN_HPP

#include "bpmncheck/model.hpp"

namespace bpmncheck {

// One process: start -> parallel fork -> n single-task branches -> parallel
// join -> end. Flow-node count is n + 4. Requires n >= 1.
BpmnModel gen_parallel(int branches);

// One process: start, then `blocks` blocks chained in sequence cycling the
// three block types (three tasks in a row; an exclusive split/merge diamond
// with two single-task branches; the same diamond with parallel gateways),
// then end. Requires blocks >= 1.
BpmnModel gen_blocks(int blocks);

}  // namespace bpmncheck

#endif
