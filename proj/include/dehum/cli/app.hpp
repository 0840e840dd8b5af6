/*
   Copyright 2026 The dehum-bench Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <iosfwd>

namespace dehum::cli {

enum exit_code : int { exit_ok = 0, exit_usage = 1, exit_remote = 2 };

/// Entry point of the `dehum` binary; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace dehum::cli
