/*
 * Copyright 2026 The lqdec Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LQDEC_LQDEC_HPP
#define LQDEC_LQDEC_HPP

#include "lqdec/bitpack.hpp"
#include "lqdec/codebook.hpp"
#include "lqdec/container.hpp"
#include "lqdec/error.hpp"
#include "lqdec/factorize.hpp"
#include "lqdec/float_format.hpp"
#include "lqdec/generators.hpp"
#include "lqdec/init.hpp"
#include "lqdec/lq.hpp"
#include "lqdec/matmul.hpp"
#include "lqdec/mckp.hpp"
#include "lqdec/nf_quant.hpp"
#include "lqdec/normal.hpp"
#include "lqdec/presets.hpp"
#include "lqdec/quant_config.hpp"
#include "lqdec/rational.hpp"
#include "lqdec/report.hpp"
#include "lqdec/serialize.hpp"
#include "lqdec/sweep.hpp"
#include "lqdec/tensor.hpp"
#include "lqdec/tensor_io.hpp"

#endif  // LQDEC_LQDEC_HPP
