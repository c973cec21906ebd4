package test.suite;

public class NOPCase {
    private int hits;

    public int count() {
        hits++;
        return hits;
    }
}
