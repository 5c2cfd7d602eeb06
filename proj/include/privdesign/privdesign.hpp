// Copyright 2026 The privdesign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRIVDESIGN_PRIVDESIGN_HPP_
#define PRIVDESIGN_PRIVDESIGN_HPP_

#include "privdesign/error.hpp"
#include "privdesign/info.hpp"
#include "privdesign/invertible.hpp"
#include "privdesign/linalg.hpp"
#include "privdesign/mechanism.hpp"
#include "privdesign/oracle.hpp"
#include "privdesign/polytope.hpp"
#include "privdesign/prob.hpp"
#include "privdesign/reference_example.hpp"
#include "privdesign/simplex.hpp"

#endif  // PRIVDESIGN_PRIVDESIGN_HPP_
