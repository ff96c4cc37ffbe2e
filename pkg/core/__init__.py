"""Expression core: extended-range arithmetic, expression trees and parsing."""
