package test.noh;

public class ClassG extends ClassF {
    public void touch() {
    }
}
