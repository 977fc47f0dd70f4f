namespace bpcube {}
