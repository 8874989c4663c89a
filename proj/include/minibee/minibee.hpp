#pragma once

#include "minibee/animator.hpp"
#include "minibee/ast.hpp"
#include "minibee/composer.hpp"
#include "minibee/corpus.hpp"
#include "minibee/errors.hpp"
#include "minibee/evaluator.hpp"
#include "minibee/explorer.hpp"
#include "minibee/parser.hpp"
#include "minibee/po.hpp"
#include "minibee/refiner.hpp"
#include "minibee/render.hpp"
#include "minibee/reports.hpp"
#include "minibee/scope.hpp"
#include "minibee/validate.hpp"
#include "minibee/value.hpp"
