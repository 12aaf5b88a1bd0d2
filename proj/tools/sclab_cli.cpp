// Copyright 2026 The sclab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>

#include "sclab.h"

int main(int argc, char** argv) {
  int code = 1;
  if (scl_run(argc, argv, &code) != SCL_OK) {
    std::fprintf(stderr, "error: %s\n", scl_last_error());
    return 1;
  }
  return code;
}
