// Copyright (c) 2026 anisorobin contributors
// SPDX-License-Identifier: Apache-2.0
#include <string>
#include <vector>

#include "anisorobin/cli.hpp"

int main(int argc, char** argv) {
  return anisorobin::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
