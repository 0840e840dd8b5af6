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

// Prints a [users] entry for the bench config.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <dehum/gateway/auth.hpp>

int main(int argc, char** argv) {
    CLI::App app{"Hash a bridge password for the [users] config section"};
    std::string user;
    std::string password;
    int iterations = dehum::gateway::default_pbkdf2_iterations;
    app.add_option("user", user, "User name")->required();
    app.add_option("--password", password, "Password (read from stdin when omitted)");
    app.add_option("--iterations", iterations, "PBKDF2 iterations")
            ->check(CLI::Range(1000, 10'000'000));
    CLI11_PARSE(app, argc, argv);

    if (password.empty() && !std::getline(std::cin, password)) {
        std::cerr << "no password given\n";
        return 1;
    }
    std::cout << user << " = \"" << dehum::gateway::hash_password(password, iterations)
              << "\"\n";
    return 0;
}
