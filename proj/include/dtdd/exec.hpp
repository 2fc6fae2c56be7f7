#pragma once

namespace dtdd {

// Execution mode for the data-parallel kernels. Serial is the reference
// implementation; OpenMp must produce bit-identical results at any thread count.
enum class ExecMode { Serial, OpenMp };

}  // namespace dtdd
