// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fas-outage Authors

#pragma once

namespace fas {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fas
