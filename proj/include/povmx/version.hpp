// Copyright (c) the povmx developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#define POVMX_VERSION "0.1.0"

namespace povmx {

inline const char *version() { return POVMX_VERSION; }

} // namespace povmx
