// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wordlen/error.hpp"
#include "wordlen/field.hpp"
#include "wordlen/poly.hpp"
#include "wordlen/extension.hpp"
#include "wordlen/matrix.hpp"
#include "wordlen/span_basis.hpp"
#include "wordlen/canonical.hpp"
#include "wordlen/spans.hpp"
#include "wordlen/words.hpp"
#include "wordlen/constructive.hpp"
#include "wordlen/io.hpp"
#include "wordlen/harness.hpp"
