// Copyright 2026 The Conformer Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace conformer_forge::cli {

/// Entry point of the conformer-forge executable. Returns 0 on success, 1 on
/// invalid arguments or unreadable inputs, 2 when the pipeline itself fails.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace conformer_forge::cli
